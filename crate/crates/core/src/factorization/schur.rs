use crate::error::{Error, Result};
use crate::linalg::{
    douglas_solve, hermitian_apply, hermitian_part, identity, op_norm, require_psd, CMatrix,
    Subspace,
};
use crate::tol::Tolerances;

/// Splitting `B = compression + complement` relative to a subspace `S`.
#[derive(Debug, Clone)]
pub struct SchurPair {
    /// Largest `X` with `0 ⪯ X ⪯ B` and `ran X ⊆ S⊥`.
    pub complement: CMatrix,
    pub compression: CMatrix,
    /// Norm of the contraction `F` in `B12 = B11^{1/2}·F·B22^{1/2}`.
    pub contraction_norm: f64,
}

fn pinv_sqrt_cut(m: &CMatrix, cut: f64) -> Result<CMatrix> {
    hermitian_apply(m, |v| if v > cut { v.sqrt().recip() } else { 0.0 })
}

/// Schur complement of `B` to `S` through the contraction form of a positive
/// block matrix.
pub fn schur_complement(b: &CMatrix, s: &Subspace, tol: &Tolerances) -> Result<SchurPair> {
    let (vals, _) = require_psd(b, tol)?;
    let n = b.nrows();
    if s.ambient_dim != n {
        return Err(Error::DimensionMismatch(format!(
            "subspace lives in dimension {}, matrix is {n}x{n}",
            s.ambient_dim
        )));
    }
    let b = hermitian_part(b);
    let k = s.dim();
    if k == 0 {
        return Ok(SchurPair {
            complement: b.clone(),
            compression: CMatrix::zeros(n, n),
            contraction_norm: 0.0,
        });
    }
    if k == n {
        return Ok(SchurPair {
            complement: CMatrix::zeros(n, n),
            compression: b,
            contraction_norm: 0.0,
        });
    }

    let mut w = CMatrix::zeros(n, n);
    w.columns_mut(0, k).copy_from(&s.basis);
    w.columns_mut(k, n - k).copy_from(&s.complement().basis);
    let local = w.adjoint() * &b * &w;
    let b11 = local.view((0, 0), (k, k)).into_owned();
    let b12 = local.view((0, k), (k, n - k)).into_owned();
    let b22 = local.view((k, k), (n - k, n - k)).into_owned();

    let cut = tol.tol_rank * vals.last().copied().unwrap_or(0.0);
    let r11 = pinv_sqrt_cut(&b11, cut)?;
    let r22 = pinv_sqrt_cut(&b22, cut)?;
    let s22 = hermitian_apply(&b22, |v| if v > cut { v.sqrt() } else { 0.0 })?;
    let f = r11 * b12 * r22;
    let inner = identity(n - k) - f.adjoint() * &f;
    let c22 = &s22 * inner * &s22;

    let mut embedded = CMatrix::zeros(n, n);
    embedded.view_mut((k, k), (n - k, n - k)).copy_from(&c22);
    let complement = hermitian_part(&(&w * embedded * w.adjoint()));
    let compression = &b - &complement;
    Ok(SchurPair {
        complement,
        compression,
        contraction_norm: op_norm(&f),
    })
}

/// Minimal `B22` making `[[B11, B12], [B12ᴴ, B22]]` positive: `Gᴴ·G` with
/// `B11^{1/2}·G = B12`.
pub fn psd_completion(b11: &CMatrix, b12: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let (vals, _) = require_psd(b11, tol)?;
    if b12.nrows() != b11.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "B11 is {0}x{0}, B12 has {1} rows",
            b11.nrows(),
            b12.nrows()
        )));
    }
    let cut = tol.tol_rank * vals.last().copied().unwrap_or(0.0);
    let root = hermitian_apply(b11, |v| if v > cut { v.sqrt() } else { 0.0 })?;
    let g = douglas_solve(&root, b12, tol)?;
    Ok(hermitian_part(&(g.adjoint() * g)))
}
