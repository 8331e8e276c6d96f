use serde::{Deserialize, Serialize};

/// Principal-angle tolerance used when matching ranges and kernels.
pub const TOL_ANGLE: f64 = 1e-7;

/// Numeric policy shared by every operation.
///
/// `tol_rank`, `tol_psd` and `tol_cluster` are relative to the norm of the
/// matrix under inspection; `tol_eq` is an absolute residual tolerance that
/// callers scale by the relevant norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_rank: f64,
    pub tol_psd: f64,
    pub tol_eq: f64,
    pub tol_cluster: f64,
    pub cond_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_rank: 1e-10,
            tol_psd: 1e-10,
            tol_eq: 1e-8,
            tol_cluster: 1e-8,
            cond_max: 1e8,
        }
    }
}

impl Tolerances {
    /// Returns `true` when every field is finite and strictly positive.
    pub fn is_valid(&self) -> bool {
        [
            self.tol_rank,
            self.tol_psd,
            self.tol_eq,
            self.tol_cluster,
            self.cond_max,
        ]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0)
    }
}
