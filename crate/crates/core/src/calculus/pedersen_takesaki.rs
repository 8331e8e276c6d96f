use crate::error::{Error, Result};
use crate::factorization::schur_complement;
use crate::linalg::{
    block2, hermitian_apply, hermitian_part, identity, op_norm, range_kernel, require_psd, CMatrix,
    Subspace, C64,
};
use crate::tol::Tolerances;

#[derive(Debug, Clone)]
pub struct PedersenTakesaki {
    /// Positive solution of `X·H·X = P·K·P`, `P` the projector onto `ran H`.
    pub x: CMatrix,
    /// Smallest `a` with `(H^{1/2}·K·H^{1/2})^{1/2} ⪯ a·H` on `ran H`.
    pub a: f64,
    pub residual: f64,
    pub scale: f64,
}

/// Solves the Riccati equation `X·H·X = P·K·P` by compressing a positive
/// block matrix to its first slot.
///
/// With `W₀ = (H^{1/2}·K·H^{1/2})^{1/2}` the block matrix is
/// `[[P, W₀^{1/2}·H^{+1/2}], [H^{+1/2}·W₀^{1/2}, a·1]]`; the (2,2) block of its
/// compression to the first slot is `X = H^{+1/2}·W₀·H^{+1/2}`.
pub fn pedersen_takesaki(h: &CMatrix, k: &CMatrix, tol: &Tolerances) -> Result<PedersenTakesaki> {
    let (h_vals, _) = require_psd(h, tol)?;
    require_psd(k, tol)?;
    if h.shape() != k.shape() {
        return Err(Error::DimensionMismatch("H and K differ in shape".into()));
    }
    let n = h.nrows();
    let cut = tol.tol_rank * h_vals.last().copied().unwrap_or(0.0);
    let h_root = hermitian_apply(h, |v| if v > cut { v.sqrt() } else { 0.0 })?;
    let h_pinv_root = hermitian_apply(h, |v| if v > cut { v.sqrt().recip() } else { 0.0 })?;
    let (ran_h, _) = range_kernel(&h_root, tol);
    let p = ran_h.projector();

    let inner = hermitian_part(&(&h_root * k * &h_root));
    // Rounding noise on the kernel of `inner` would leak out of `ran H`
    // after the square root, so it is cut at the rank tolerance.
    let inner_cut = tol.tol_rank * inner.symmetric_eigenvalues().max().max(0.0);
    let w0 = hermitian_apply(&inner, |v| if v > inner_cut { v.sqrt() } else { 0.0 })?;
    let w0_norm = op_norm(&w0);
    let leak = op_norm(&(&w0 - &p * &w0));
    if leak > tol.tol_eq * w0_norm.max(f64::MIN_POSITIVE) {
        return Err(Error::Infeasible(format!(
            "ran W is not contained in ran H (defect {leak:.3e})"
        )));
    }
    let w0_cut = inner_cut.sqrt();
    let w0_root = hermitian_apply(&w0, |v| if v > w0_cut { v.sqrt() } else { 0.0 })?;

    let pencil = hermitian_part(&(&h_pinv_root * &w0 * &h_pinv_root));
    let a = pencil.symmetric_eigenvalues().max().max(0.0);

    // `ran W₀ ⊆ ran H`; projecting removes the remaining rounding so the
    // block matrix stays positive.
    let off = &p * &w0_root * &h_pinv_root;
    let block = block2(&p, &off, &off.adjoint(), &(identity(n) * C64::new(a, 0.0)));
    let mut first = CMatrix::zeros(2 * n, n);
    first.view_mut((0, 0), (n, n)).fill_with_identity();
    let slot = Subspace {
        ambient_dim: 2 * n,
        basis: first,
    };
    let compression = schur_complement(&block, &slot, tol)?.compression;
    let x = hermitian_part(&compression.view((n, n), (n, n)).into_owned());

    let target = &p * k * &p;
    let residual = op_norm(&(&x * h * &x - &target));
    let scale = op_norm(&target)
        .max(op_norm(&x).powi(2) * op_norm(h))
        .max(f64::MIN_POSITIVE);
    Ok(PedersenTakesaki {
        x,
        a,
        residual,
        scale,
    })
}
