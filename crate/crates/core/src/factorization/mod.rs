//! Factorizations `T = A·B` with `A, B ⪰ 0`, the solution cone of `A·X = T`,
//! Schur complements and the M-decomposition.

mod mdecomp;
mod schur;
mod sebestyen;

pub use mdecomp::{m_decomposition, MDecomposition};
pub use schur::{psd_completion, schur_complement, SchurPair};
pub use sebestyen::{
    cone_minimal, cone_sample, sebestyen_solve, ConeMinimal, ConeSample, SebestyenSolution,
};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_part, inverse, is_loewner_leq, op_norm, range_kernel, subspace_distance, CMatrix,
    Eigenbasis, C64,
};
use crate::membership::is_l2p;
use crate::tol::{Tolerances, TOL_ANGLE};
use serde::{Deserialize, Serialize};

/// A pair of positive factors with its certificates.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub a: CMatrix,
    pub b: CMatrix,
    /// `‖A·B − T‖` in the spectral norm.
    pub residual: f64,
    pub optimal: bool,
    /// Largest principal angle between `ran A` and `ran T`.
    pub range_match: f64,
    /// Largest principal angle between `ker B` and `ker T`.
    pub kernel_match: f64,
}

impl Factorization {
    /// Measures residual and optimality of `(a, b)` as a factorization of `t`.
    pub fn certify(t: &CMatrix, a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Self {
        let residual = op_norm(&(a * b - t));
        let (ran_t, ker_t) = range_kernel(t, tol);
        let range_match = subspace_distance(&range_kernel(a, tol).0, &ran_t);
        let kernel_match = subspace_distance(&range_kernel(b, tol).1, &ker_t);
        Self {
            a: a.clone(),
            b: b.clone(),
            residual,
            optimal: range_match <= TOL_ANGLE && kernel_match <= TOL_ANGLE,
            range_match,
            kernel_match,
        }
    }
}

/// Real, clipped eigenvalue per column: clusters within the positivity floor
/// of zero become exactly zero.
fn clipped_values(basis: &Eigenbasis, tol: &Tolerances) -> Vec<f64> {
    let floor = tol.tol_psd * basis.report.norm;
    basis
        .values
        .iter()
        .map(|z| if z.re <= floor { 0.0 } else { z.re })
        .collect()
}

fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| C64::new(v, 0.0)),
    ))
}

/// `A = G·P·Gᴴ`, `B = G⁻ᴴ·C·G⁻¹` from an eigenbasis `T·G = G·C`.
pub(crate) fn optimal_pair_from(
    t: &CMatrix,
    basis: &Eigenbasis,
    tol: &Tolerances,
) -> Result<Factorization> {
    let g = &basis.vectors;
    let values = clipped_values(basis, tol);
    let p: Vec<f64> = values
        .iter()
        .map(|&v| if v > 0.0 { 1.0 } else { 0.0 })
        .collect();
    let g_inv = inverse(g)?;
    let a = hermitian_part(&(g * diag(&p) * g.adjoint()));
    let b = hermitian_part(&(g_inv.adjoint() * diag(&values) * &g_inv));
    Ok(Factorization::certify(t, &a, &b, tol))
}

/// Optimal pair with closed ranges, built from the eigendecomposition.
pub fn optimal_pair(t: &CMatrix, tol: &Tolerances) -> Result<Factorization> {
    let verdict = is_l2p(t, tol)?;
    verdict.witness.ok_or(Error::NotInClass(verdict.reason))
}

/// Factorization whose right factor is invertible.
///
/// Starts from the pair `A = G·C·Gᴴ`, `B' = G⁻ᴴ·P·G⁻¹` (closed ranges, the
/// eigenvalues carried by the left factor) and returns `(A, B' + P_ker A)`.
pub fn invertible_factor_pair(t: &CMatrix, tol: &Tolerances) -> Result<Factorization> {
    let verdict = is_l2p(t, tol)?;
    if !verdict.in_l2p {
        return Err(Error::NotInClass(verdict.reason));
    }
    let basis = crate::linalg::eigenbasis(t, tol)?;
    let g = &basis.vectors;
    let values = clipped_values(&basis, tol);
    let p: Vec<f64> = values
        .iter()
        .map(|&v| if v > 0.0 { 1.0 } else { 0.0 })
        .collect();
    let g_inv = inverse(g)?;
    let a = hermitian_part(&(g * diag(&values) * g.adjoint()));
    let b_prime = g_inv.adjoint() * diag(&p) * &g_inv;
    let (_, ker_a) = range_kernel(&a, tol);
    let b = hermitian_part(&(b_prime + ker_a.projector()));
    let pair = Factorization::certify(t, &a, &b, tol);
    let (min, max) = {
        let ev = b.symmetric_eigenvalues();
        (ev.min(), ev.max())
    };
    if !(min > tol.tol_psd * max) {
        return Err(Error::NotInvertible {
            min_eigenvalue: min,
            floor: tol.tol_psd * max,
        });
    }
    Ok(pair)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Componentwise Löwner comparison of two pairs.
pub fn pair_leq(p: &Factorization, q: &Factorization, tol: &Tolerances) -> Result<PairOrder> {
    if p.a.shape() != q.a.shape() || p.b.shape() != q.b.shape() {
        return Err(Error::DimensionMismatch(
            "pairs act on different spaces".into(),
        ));
    }
    let scale = op_norm(&p.a)
        .max(op_norm(&q.a))
        .max(op_norm(&p.b))
        .max(op_norm(&q.b))
        .max(f64::MIN_POSITIVE);
    let same = op_norm(&(&p.a - &q.a)) <= tol.tol_eq * scale
        && op_norm(&(&p.b - &q.b)) <= tol.tol_eq * scale;
    if same {
        return Ok(PairOrder::Equal);
    }
    let le = is_loewner_leq(&p.a, &q.a, tol) && is_loewner_leq(&p.b, &q.b, tol);
    let ge = is_loewner_leq(&q.a, &p.a, tol) && is_loewner_leq(&q.b, &p.b, tol);
    Ok(match (le, ge) {
        (true, false) => PairOrder::Less,
        (false, true) => PairOrder::Greater,
        (true, true) => PairOrder::Equal,
        (false, false) => PairOrder::Incomparable,
    })
}
