use crate::error::Result;
use crate::factorization::optimal_pair;
use crate::linalg::{inverse, op_norm, pinv, range_kernel, CMatrix};
use crate::tol::Tolerances;

#[derive(Debug, Clone)]
pub struct MpInverse {
    /// `B⁺·Q·A⁺`.
    pub dagger: CMatrix,
    /// `Qᴴ·T⁺·Qᴴ`.
    pub one_two_inverse: CMatrix,
    /// Oblique projection onto `ran Tᴴ` along `ker Tᴴ`.
    pub q: CMatrix,
    /// Distance to the SVD pseudo-inverse.
    pub oracle_error: f64,
}

/// Moore–Penrose inverse of a member through its optimal pair.
pub fn mp_inverse_l2p(t: &CMatrix, tol: &Tolerances) -> Result<MpInverse> {
    let pair = optimal_pair(t, tol)?;
    let n = t.nrows();
    let (co_range, _) = range_kernel(&t.adjoint(), tol);
    let (_, co_kernel) = range_kernel(&t.adjoint(), tol);
    let k = co_range.dim();
    let mut w = CMatrix::zeros(n, n);
    w.columns_mut(0, k).copy_from(&co_range.basis);
    w.columns_mut(k, n - k).copy_from(&co_kernel.basis);
    let mut selector = CMatrix::zeros(n, n);
    selector.view_mut((0, 0), (k, k)).fill_with_identity();
    let q = &w * selector * inverse(&w)?;

    let dagger = pinv(&pair.b, tol) * &q * pinv(&pair.a, tol);
    let one_two_inverse = q.adjoint() * &dagger * q.adjoint();
    let oracle_error = op_norm(&(&dagger - pinv(t, tol)));
    Ok(MpInverse {
        dagger,
        one_two_inverse,
        q,
        oracle_error,
    })
}
