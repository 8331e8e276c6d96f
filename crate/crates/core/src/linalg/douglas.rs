use super::{op_norm, pinv, CMatrix};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// Minimal-norm solution of `A·X = T`, provided `ran T ⊆ ran A`.
pub fn douglas_solve(a: &CMatrix, t: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    if a.nrows() != t.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "operator has {} rows, right-hand side has {}",
            a.nrows(),
            t.nrows()
        )));
    }
    let x = pinv(a, tol) * t;
    // A·pinv(A) is the projector onto ran A, so this is the part of T
    // outside that range.
    let defect = op_norm(&(t - a * &x));
    if defect > tol.tol_eq * op_norm(t) {
        return Err(Error::RangeNotContained { defect });
    }
    Ok(x)
}
