use super::{c, full_svd, CMatrix};
use crate::tol::Tolerances;

/// Moore–Penrose pseudo-inverse; singular values at or below
/// `tol_rank · σ_max` are treated as zero.
pub fn pinv(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(cols, rows);
    }
    let svd = full_svd(m);
    let cut = tol.tol_rank * svd.sigma[0];
    let mut out = CMatrix::zeros(cols, rows);
    for (k, &s) in svd.sigma.iter().enumerate() {
        if s > cut && s > 0.0 {
            out += (svd.v.column(k) * svd.u.column(k).adjoint()) * c(s.recip());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dist, identity, real_diag, real_matrix};

    #[test]
    fn diagonal() {
        let tol = Tolerances::default();
        let p = pinv(&real_diag(&[2.0, 0.0]), &tol);
        assert!(dist(&p, &real_diag(&[0.5, 0.0])) < 1e-15);
    }

    #[test]
    fn oblique_projection() {
        let tol = Tolerances::default();
        let p = pinv(&real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]), &tol);
        assert!(dist(&p, &real_matrix(2, 2, &[0.5, 0.0, 0.5, 0.0])) < 1e-15);
    }

    #[test]
    fn identity_is_fixed() {
        let tol = Tolerances::default();
        assert!(dist(&pinv(&identity(4), &tol), &identity(4)) < 1e-15);
    }

    #[test]
    fn rectangular_shape() {
        let tol = Tolerances::default();
        let m = real_matrix(1, 3, &[1.0, 2.0, 2.0]);
        let p = pinv(&m, &tol);
        assert_eq!(p.shape(), (3, 1));
        assert!(dist(&(&m * &p), &identity(1)) < 1e-15);
    }
}
