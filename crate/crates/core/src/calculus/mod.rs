//! Functional calculus on members: square roots, geometric means, spectral
//! decompositions, generalized inverses and resolvent bounds.

mod mp_inverse;
mod pedersen_takesaki;
mod resolvent;
mod riesz;
mod spectral;

pub use mp_inverse::{mp_inverse_l2p, MpInverse};
pub use pedersen_takesaki::{pedersen_takesaki, PedersenTakesaki};
pub use resolvent::{resolvent_growth_certificate, ResolventCertificate};
pub use riesz::{riesz_decomposition, RieszDecomposition, RieszTerm};
pub use spectral::{
    algebraic_spectral_subspace, local_spectral_subspace, AlgebraicSubspace, LocalSubspace,
};

use crate::error::{Error, Result};
use crate::factorization::invertible_factor_pair;
use crate::linalg::{
    eigenbasis, hermitian_part, inverse, psd_function, psd_inverse, psd_sqrt, require_psd, CMatrix,
    Eigenbasis, C64,
};
use crate::membership::is_l2p;
use crate::tol::Tolerances;

/// Geometric mean `E # F = E^{1/2}·(E^{-1/2}·F·E^{-1/2})^{1/2}·E^{1/2}`.
pub fn geometric_mean(e: &CMatrix, f: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    psd_inverse(e, tol)?;
    require_psd(f, tol)?;
    if e.shape() != f.shape() {
        return Err(Error::DimensionMismatch("E and F differ in shape".into()));
    }
    let root = psd_sqrt(e, tol)?;
    let inv_root = psd_function(e, tol, |v| v.sqrt().recip())?;
    let inner = hermitian_part(&(&inv_root * f * &inv_root));
    let middle = psd_sqrt(&inner, tol)?;
    Ok(hermitian_part(&(&root * middle * &root)))
}

/// Square root of a member with nonnegative spectrum: `R = (B⁻¹ # A)·B` for
/// a factorization with invertible `B`.
pub fn sqrt_l2p(t: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let pair = invertible_factor_pair(t, tol)?;
    let b_inv = psd_inverse(&pair.b, tol)?;
    let mean = geometric_mean(&b_inv, &pair.a, tol)?;
    Ok(mean * &pair.b)
}

pub(crate) fn member_basis(t: &CMatrix, tol: &Tolerances) -> Result<Eigenbasis> {
    let verdict = is_l2p(t, tol)?;
    if !verdict.in_l2p {
        return Err(Error::NotInClass(verdict.reason));
    }
    eigenbasis(t, tol)
}

/// Eigenvalue per column, real part, clipped into `[0, ‖T‖]`.
pub(crate) fn clipped_spectrum(basis: &Eigenbasis) -> Vec<f64> {
    let norm = basis.report.norm;
    basis.values.iter().map(|z| z.re.clamp(0.0, norm)).collect()
}

/// `f(T) = G·f(C)·G⁻¹` for a member `T = G·C·G⁻¹`.
pub fn borel_calculus(t: &CMatrix, f: &dyn Fn(f64) -> f64, tol: &Tolerances) -> Result<CMatrix> {
    let basis = member_basis(t, tol)?;
    let g = &basis.vectors;
    let g_inv = inverse(g)?;
    let mut scaled = g.clone();
    for (j, v) in clipped_spectrum(&basis).into_iter().enumerate() {
        let fv = f(v);
        if !fv.is_finite() {
            return Err(Error::DomainError(v));
        }
        scaled
            .column_mut(j)
            .iter_mut()
            .for_each(|z| *z *= C64::new(fv, 0.0));
    }
    let out = scaled * g_inv;
    Ok(out)
}
