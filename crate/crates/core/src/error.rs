use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {allowed:.3e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e} below floor {floor:.3e})")]
    NotPsd { min_eigenvalue: f64, floor: f64 },

    #[error(
        "matrix is not invertible (smallest eigenvalue {min_eigenvalue:.3e}, floor {floor:.3e})"
    )]
    NotInvertible { min_eigenvalue: f64, floor: f64 },

    #[error("range of the right-hand side is not contained in the range of the operator (defect {defect:.3e})")]
    RangeNotContained { defect: f64 },

    #[error("operator is not a product of two positive matrices: {0}")]
    NotInClass(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("perturbation is not admissible: {0}")]
    InvalidPerturbation(String),

    #[error("function is undefined at eigenvalue {0}")]
    DomainError(f64),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
