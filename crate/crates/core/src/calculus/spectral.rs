use super::member_basis;
use crate::error::Result;
use crate::linalg::{
    identity, op_norm, range_kernel_scaled, subspace_distance, subspace_ops, CMatrix, Subspace, C64,
};
use crate::tol::{Tolerances, TOL_ANGLE};

/// `ker(T − λ)` for a member, with the Jordan-freeness check.
#[derive(Debug, Clone)]
pub struct LocalSubspace {
    pub subspace: Subspace,
    /// `dim ker(T − λ)²`, computed as `dim ker N + dim(ran N ∩ ker N)` so no
    /// singular values are squared.
    pub kernel_sq_dim: usize,
    pub jordan_free: bool,
}

fn shifted(t: &CMatrix, lambda: f64) -> CMatrix {
    t - identity(t.nrows()) * C64::new(lambda, 0.0)
}

pub fn local_spectral_subspace(
    t: &CMatrix,
    lambda: f64,
    tol: &Tolerances,
) -> Result<LocalSubspace> {
    member_basis(t, tol)?;
    local_unchecked(t, lambda, tol)
}

pub(crate) fn local_unchecked(t: &CMatrix, lambda: f64, tol: &Tolerances) -> Result<LocalSubspace> {
    let n = shifted(t, lambda);
    let (range, kernel) = range_kernel_scaled(&n, op_norm(t), tol);
    let overlap = subspace_ops(&range, &kernel, tol)?.intersection.dim();
    Ok(LocalSubspace {
        kernel_sq_dim: kernel.dim() + overlap,
        jordan_free: overlap == 0,
        subspace: kernel,
    })
}

/// `∩_{λ ∈ σ(T) \ F} ran(T − λ)`, compared against the span of the
/// eigenspaces for eigenvalues in `F`.
#[derive(Debug, Clone)]
pub struct AlgebraicSubspace {
    pub subspace: Subspace,
    pub eigenspace_sum: Subspace,
    /// Largest principal angle between the two constructions.
    pub angle: f64,
    pub certified: bool,
}

pub fn algebraic_spectral_subspace(
    t: &CMatrix,
    set: &[f64],
    tol: &Tolerances,
) -> Result<AlgebraicSubspace> {
    let basis = member_basis(t, tol)?;
    let dim = t.nrows();
    let width = tol.tol_cluster * basis.report.norm.max(1.0);
    let in_set = |lambda: f64| set.iter().any(|&f| (f - lambda).abs() <= width);

    let mut subspace = Subspace::full(dim);
    let mut eigenspace_sum = Subspace::zero(dim);
    for cluster in &basis.report.clusters {
        let lambda = cluster.eigenvalue.re;
        if in_set(lambda) {
            let kernel = range_kernel_scaled(&shifted(t, lambda), basis.report.norm, tol).1;
            eigenspace_sum = subspace_ops(&eigenspace_sum, &kernel, tol)?.sum;
        } else {
            let range = range_kernel_scaled(&shifted(t, lambda), basis.report.norm, tol).0;
            subspace = subspace_ops(&subspace, &range, tol)?.intersection;
        }
    }
    let angle = subspace_distance(&subspace, &eigenspace_sum);
    Ok(AlgebraicSubspace {
        certified: angle <= TOL_ANGLE,
        subspace,
        eigenspace_sum,
        angle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::linalg::{dist, real_diag, real_matrix};

    #[test]
    fn kernel_of_oblique_projection() {
        let tol = Tolerances::default();
        let q = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let l = local_spectral_subspace(&q, 0.0, &tol).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(dist(&l.subspace.basis, &real_matrix(2, 1, &[s, -s])) < 1e-14);
        assert!(l.jordan_free && l.kernel_sq_dim == 1);
        assert_eq!(
            local_spectral_subspace(&q, 0.5, &tol)
                .unwrap()
                .subspace
                .dim(),
            0
        );
        let full = local_spectral_subspace(&real_diag(&[3.0, 3.0]), 3.0, &tol).unwrap();
        assert_eq!(full.subspace.dim(), 2);
    }

    #[test]
    fn jordan_block_is_detected_without_membership() {
        let tol = Tolerances::default();
        let nil = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let l = local_unchecked(&nil, 0.0, &tol).unwrap();
        assert!(!l.jordan_free);
        assert_eq!((l.subspace.dim(), l.kernel_sq_dim), (1, 2));
        assert!(matches!(
            local_spectral_subspace(&nil, 0.0, &tol),
            Err(Error::NotInClass(_))
        ));
    }

    #[test]
    fn algebraic_subspaces() {
        let tol = Tolerances::default();
        let t = real_diag(&[1.0, 2.0, 0.0]);
        let a = algebraic_spectral_subspace(&t, &[1.0], &tol).unwrap();
        assert_eq!(a.subspace.dim(), 1);
        assert!(dist(&a.subspace.projector(), &real_diag(&[1.0, 0.0, 0.0])) < 1e-14);
        assert!(a.certified);
        let all = algebraic_spectral_subspace(&t, &[0.0, 1.0, 2.0], &tol).unwrap();
        assert_eq!(all.subspace.dim(), 3);
        let none = algebraic_spectral_subspace(&t, &[], &tol).unwrap();
        assert_eq!(none.subspace.dim(), 0);
        assert!(none.certified);
    }
}
