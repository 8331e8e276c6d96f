use super::{schur_complement, Factorization};
use crate::error::{Error, Result};
use crate::linalg::{
    douglas_solve, hermitian_part, op_norm, pinv, psd_function, range_kernel, require_psd,
    subspace_distance, CMatrix,
};
use crate::membership::feasibility_lambda;
use crate::tol::{Tolerances, TOL_ANGLE};

/// Positive solution of `A·X = T` together with its certificates.
#[derive(Debug, Clone)]
pub struct SebestyenSolution {
    pub x: CMatrix,
    /// Feasibility constant: `T·Tᴴ ⪯ λ·A·Tᴴ`.
    pub lambda: f64,
    pub residual: f64,
    /// `max(‖T‖, ‖A‖·‖X‖)`, the scale the residual is judged against.
    pub scale: f64,
    /// Largest principal angle between `ker X` and `ker T`.
    pub kernel_angle: f64,
    /// Norm of the Schur complement of `X` to `ran T`.
    pub schur_norm: f64,
}

/// Solves `A·X = T` with `X ⪰ 0` and `ker X = ker T`: with `S = A·Tᴴ`
/// (Hermitian and positive when feasible) and `T = S^{1/2}·G`, `X = Gᴴ·G`.
pub fn sebestyen_solve(a: &CMatrix, t: &CMatrix, tol: &Tolerances) -> Result<SebestyenSolution> {
    let lambda = feasibility_lambda(a, t, tol)?;
    let s = hermitian_part(&(a * t.adjoint()));
    let cut = tol.tol_rank * op_norm(&s);
    let root = psd_function(&s, tol, |v| if v > cut { v.sqrt() } else { 0.0 })?;
    let g = douglas_solve(&root, t, tol)?;
    let x = hermitian_part(&(g.adjoint() * g));

    let residual = op_norm(&(a * &x - t));
    let scale = op_norm(t).max(op_norm(a) * op_norm(&x));
    let (ran_t, ker_t) = range_kernel(t, tol);
    let kernel_angle = subspace_distance(&range_kernel(&x, tol).1, &ker_t);
    let schur_norm = op_norm(&schur_complement(&x, &ran_t, tol)?.complement);
    Ok(SebestyenSolution {
        x,
        lambda,
        residual,
        scale,
        kernel_angle,
        schur_norm,
    })
}

/// Minimum `B₀` of the cone `{B ⪰ 0 : A·B = T}`.
#[derive(Debug, Clone)]
pub struct ConeMinimal {
    pub b0: CMatrix,
    pub solution: SebestyenSolution,
    /// Largest principal angle between `ran A` and `ran T`.
    pub range_angle: f64,
    /// Whether `ran A = ran T`, the hypothesis under which `B₀` is the minimum.
    pub ranges_match: bool,
    /// In blocks over `ran T ⊕ ker Tᴴ`: `‖B22 − B12ᴴ·B11⁺·B12‖`.
    pub block_residual: f64,
}

pub fn cone_minimal(a: &CMatrix, t: &CMatrix, tol: &Tolerances) -> Result<ConeMinimal> {
    let solution = sebestyen_solve(a, t, tol)?;
    let b0 = solution.x.clone();
    let (ran_t, _) = range_kernel(t, tol);
    let range_angle = subspace_distance(&range_kernel(a, tol).0, &ran_t);

    let n = t.nrows();
    let k = ran_t.dim();
    let mut w = CMatrix::zeros(n, n);
    w.columns_mut(0, k).copy_from(&ran_t.basis);
    w.columns_mut(k, n - k).copy_from(&ran_t.complement().basis);
    let local = w.adjoint() * &b0 * &w;
    let b11 = local.view((0, 0), (k, k)).into_owned();
    let b12 = local.view((0, k), (k, n - k)).into_owned();
    let b22 = local.view((k, k), (n - k, n - k)).into_owned();
    let block_residual = op_norm(&(b22 - b12.adjoint() * pinv(&b11, tol) * &b12));

    Ok(ConeMinimal {
        b0,
        solution,
        range_angle,
        ranges_match: range_angle <= TOL_ANGLE,
        block_residual,
    })
}

/// Element `B₀ + Z` of the solution cone.
#[derive(Debug, Clone)]
pub struct ConeSample {
    pub b: CMatrix,
    pub pair: Factorization,
    /// `ran Z ⊆ ran Tᴴ ∩ ker Tᴴ`, the condition for `(A, B₀ + Z)` to stay
    /// optimal.
    pub keeps_optimal: bool,
}

pub fn cone_sample(a: &CMatrix, t: &CMatrix, z: &CMatrix, tol: &Tolerances) -> Result<ConeSample> {
    let minimal = cone_minimal(a, t, tol)?;
    require_psd(z, tol)?;
    if z.shape() != t.shape() {
        return Err(Error::DimensionMismatch("Z and T differ in shape".into()));
    }
    let (ran_z, _) = range_kernel(z, tol);
    let (ran_t, _) = range_kernel(t, tol);
    let leak = op_norm(&(ran_t.projector() * &ran_z.basis));
    if leak > TOL_ANGLE {
        return Err(Error::InvalidPerturbation(format!(
            "ran Z leaves ker Tᴴ (sine of angle {leak:.3e})"
        )));
    }
    let b = hermitian_part(&(&minimal.b0 + z));
    let pair = Factorization::certify(t, a, &b, tol);
    let scale = op_norm(t).max(op_norm(a) * op_norm(&b));
    if pair.residual > tol.tol_eq * scale {
        return Err(Error::InvalidPerturbation(format!(
            "A·Z does not vanish (residual {:.3e})",
            pair.residual
        )));
    }

    let (co_range, _) = range_kernel(&t.adjoint(), tol);
    let co_kernel = ran_t.complement();
    let meet = crate::linalg::subspace_ops(&co_range, &co_kernel, tol)?.intersection;
    let outside = op_norm(&(&ran_z.basis - meet.projector() * &ran_z.basis));
    Ok(ConeSample {
        b,
        pair,
        keeps_optimal: outside <= TOL_ANGLE,
    })
}
