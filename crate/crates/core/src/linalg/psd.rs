use super::{c, checked_hermitian, eig_hermitian, hermitian_part, CMatrix};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// Validates a Hermitian PSD matrix and returns its eigendecomposition with
/// negative eigenvalues (already known to be above the floor) clipped to zero.
pub fn require_psd(m: &CMatrix, tol: &Tolerances) -> Result<(Vec<f64>, CMatrix)> {
    let h = checked_hermitian(m, tol)?;
    let (mut vals, vecs) = eig_hermitian(&h)?;
    let scale = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let floor = -tol.tol_psd * scale;
    if let Some(&min) = vals.first() {
        if min < floor {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
                floor,
            });
        }
    }
    vals.iter_mut().for_each(|v| *v = v.max(0.0));
    Ok((vals, vecs))
}

fn recompose(vals: &[f64], vecs: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let fv = c(f(v));
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= fv);
    }
    hermitian_part(&(scaled * vecs.adjoint()))
}

/// Positive square root of a Hermitian PSD matrix. Eigenvalues at or below
/// `tol_rank · λ_max` are treated as zero, so rounding noise on the kernel
/// does not turn into `√ε`-sized entries.
pub fn psd_sqrt(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let (vals, vecs) = require_psd(m, tol)?;
    let cut = tol.tol_rank * vals.last().copied().unwrap_or(0.0);
    Ok(recompose(&vals, &vecs, |v| {
        if v > cut {
            v.sqrt()
        } else {
            0.0
        }
    }))
}

/// Applies `f` to the (clipped) spectrum of a Hermitian PSD matrix.
pub fn psd_function(m: &CMatrix, tol: &Tolerances, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, vecs) = require_psd(m, tol)?;
    Ok(recompose(&vals, &vecs, f))
}

/// Moore–Penrose inverse of `M^{1/2}` for PSD `M`; eigenvalues at or below
/// `tol_rank · λ_max` are treated as zero.
pub fn psd_pinv_sqrt(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let (vals, vecs) = require_psd(m, tol)?;
    let cut = tol.tol_rank * vals.last().copied().unwrap_or(0.0);
    Ok(recompose(&vals, &vecs, |v| {
        if v > cut {
            v.sqrt().recip()
        } else {
            0.0
        }
    }))
}

/// Inverse of a positive definite matrix.
pub fn psd_inverse(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let (vals, vecs) = require_psd(m, tol)?;
    let max = vals.last().copied().unwrap_or(0.0);
    let min = vals.first().copied().unwrap_or(0.0);
    let floor = tol.tol_psd * max;
    if !(min > floor) {
        return Err(Error::NotInvertible {
            min_eigenvalue: min,
            floor,
        });
    }
    Ok(recompose(&vals, &vecs, f64::recip))
}

/// Applies `f` to the spectrum of the Hermitian part of `m`, negative
/// eigenvalues clipped to zero. No positivity check.
pub(crate) fn hermitian_apply(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (mut vals, vecs) = eig_hermitian(m)?;
    vals.iter_mut().for_each(|v| *v = v.max(0.0));
    Ok(recompose(&vals, &vecs, f))
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Löwner comparison `a ⪯ b` with floor `tol_psd · max(‖a‖, ‖b‖)`.
pub fn is_loewner_leq(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> bool {
    let scale = super::op_norm(a).max(super::op_norm(b));
    min_eigenvalue(&(b - a)) >= -tol.tol_psd * scale
}
