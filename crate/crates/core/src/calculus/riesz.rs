use super::member_basis;
use crate::error::Result;
use crate::factorization::Factorization;
use crate::linalg::{hermitian_part, identity, inverse, op_norm, range_kernel, CMatrix, C64};
use crate::tol::Tolerances;

#[derive(Debug, Clone)]
pub struct RieszTerm {
    pub eigenvalue: f64,
    /// Spectral projection onto the eigenspace along the other eigenspaces.
    pub projection: CMatrix,
}

#[derive(Debug, Clone)]
pub struct RieszDecomposition {
    pub terms: Vec<RieszTerm>,
    /// `A = Σ_{λⱼ>0} P_{ran Qⱼ}`, `B = Σ λⱼ·QⱼᴴQⱼ`.
    pub optimal_pair_sum: Factorization,
}

impl RieszDecomposition {
    /// `‖Σ Qⱼ − 1‖`.
    pub fn partition_defect(&self) -> f64 {
        let n = self.terms.first().map_or(0, |t| t.projection.nrows());
        let sum = self
            .terms
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, t| acc + &t.projection);
        op_norm(&(sum - identity(n)))
    }

    /// Largest `‖Qᵢ·Qⱼ‖` over `i ≠ j`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, p) in self.terms.iter().enumerate() {
            for (j, q) in self.terms.iter().enumerate() {
                if i != j {
                    worst = worst.max(op_norm(&(&p.projection * &q.projection)));
                }
            }
        }
        worst
    }

    /// `Σ λⱼ·Qⱼ`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.terms.first().map_or(0, |t| t.projection.nrows());
        self.terms.iter().fold(CMatrix::zeros(n, n), |acc, t| {
            acc + &t.projection * C64::new(t.eigenvalue, 0.0)
        })
    }
}

/// `T = Σ λⱼ·Qⱼ` with `Qⱼ` the spectral projections of the eigenvalue
/// clusters, built from right and left eigenvector blocks.
pub fn riesz_decomposition(t: &CMatrix, tol: &Tolerances) -> Result<RieszDecomposition> {
    let basis = member_basis(t, tol)?;
    let n = t.nrows();
    let g = &basis.vectors;
    let g_inv = inverse(g)?;
    let floor = tol.tol_psd * basis.report.norm;

    let mut terms = Vec::new();
    let mut a = CMatrix::zeros(n, n);
    let mut b = CMatrix::zeros(n, n);
    let mut start = 0;
    for cluster in &basis.report.clusters {
        let k = cluster.geometric_mult;
        let right = g.columns(start, k);
        let left = g_inv.rows(start, k);
        let q = right * left;
        let lambda = if cluster.eigenvalue.re <= floor {
            0.0
        } else {
            cluster.eigenvalue.re
        };
        if lambda > 0.0 {
            a += range_kernel(&q, tol).0.projector();
            b += q.adjoint() * &q * C64::new(lambda, 0.0);
        }
        terms.push(RieszTerm {
            eigenvalue: lambda,
            projection: q,
        });
        start += k;
    }
    let optimal_pair_sum = Factorization::certify(t, &hermitian_part(&a), &hermitian_part(&b), tol);
    Ok(RieszDecomposition {
        terms,
        optimal_pair_sum,
    })
}
