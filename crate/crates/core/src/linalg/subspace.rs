use super::{fix_phases, full_svd, identity, projector, rank_of, singular_values, CMatrix};
use crate::error::{Error, Result};
use crate::tol::Tolerances;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// Subspace of `C^ambient_dim` held as an orthonormal column basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: CMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: identity(ambient_dim),
        }
    }

    /// Orthonormal basis for the span of `columns`, keeping directions whose
    /// singular value exceeds `tol_rank · σ_max`.
    pub fn span(columns: &CMatrix, tol: &Tolerances) -> Self {
        range_kernel(columns, tol).0
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn projector(&self) -> CMatrix {
        projector(&self.basis)
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Self {
        let n = self.ambient_dim;
        let k = self.dim();
        if k == 0 {
            return Self::full(n);
        }
        let svd = full_svd(&self.basis.adjoint());
        let mut basis = svd.v.columns(k, n - k).into_owned();
        fix_phases(&mut basis);
        Self {
            ambient_dim: n,
            basis,
        }
    }

    /// Largest deviation of `basisᴴ·basis` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        super::op_norm(&(self.basis.adjoint() * &self.basis - identity(self.dim())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceOps {
    pub intersection: Subspace,
    pub sum: Subspace,
    /// Ascending, in `[0, π/2]`, one per dimension of the smaller subspace.
    pub principal_angles: Vec<f64>,
}

/// Range (left singular vectors above the rank cutoff) and kernel (right
/// singular vectors at or below it).
pub fn range_kernel(m: &CMatrix, tol: &Tolerances) -> (Subspace, Subspace) {
    range_kernel_scaled(m, 0.0, tol)
}

/// Like [`range_kernel`], with singular values at or below
/// `tol_rank · max(σ_max, scale)` counted as zero. Shifted matrices `T − λ`
/// should be judged against `‖T‖`, not against their own (possibly tiny) norm.
pub fn range_kernel_scaled(m: &CMatrix, scale: f64, tol: &Tolerances) -> (Subspace, Subspace) {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return (Subspace::zero(rows), Subspace::full(cols));
    }
    let svd = full_svd(m);
    let r = if scale > svd.sigma.first().copied().unwrap_or(0.0) {
        svd.sigma
            .iter()
            .filter(|&&s| s > tol.tol_rank * scale)
            .count()
    } else {
        rank_of(&svd.sigma, tol.tol_rank)
    };
    let mut range = svd.u.columns(0, r).into_owned();
    let mut kernel = svd.v.columns(r, cols - r).into_owned();
    fix_phases(&mut range);
    fix_phases(&mut kernel);
    (
        Subspace {
            ambient_dim: rows,
            basis: range,
        },
        Subspace {
            ambient_dim: cols,
            basis: kernel,
        },
    )
}

/// Principal angles between two subspaces of the same ambient space.
///
/// Small angles come from sines, large ones from cosines, which keeps both
/// ends of the range accurate.
fn principal_angles(u: &Subspace, v: &Subspace) -> Vec<f64> {
    let (big, small) = if u.dim() >= v.dim() { (u, v) } else { (v, u) };
    let p = small.dim();
    if p == 0 {
        return Vec::new();
    }
    let cosines = singular_values(&(big.basis.adjoint() * &small.basis));
    let mut cosines: Vec<f64> = cosines.iter().map(|s| s.min(1.0)).collect();
    cosines.sort_by(|a, b| b.total_cmp(a));
    let residual = &small.basis - big.projector() * &small.basis;
    let mut sines: Vec<f64> = singular_values(&residual)
        .iter()
        .map(|s| s.min(1.0))
        .collect();
    sines.sort_by(f64::total_cmp);
    (0..p)
        .map(|i| {
            let from_cos = cosines[i].acos();
            if from_cos < FRAC_PI_4 {
                sines[i].asin()
            } else {
                from_cos
            }
        })
        .collect()
}

/// Intersection, sum and principal angles.
///
/// Both the intersection and the sum test the same quantity against the
/// absolute tolerance `tol_eq`: the singular values `sqrt(1 − cos θ)` of the
/// stacked complement projectors and of the concatenated bases. The
/// dimension identity `dim(U∩V) + dim(U+V) = dim U + dim V` is therefore
/// preserved exactly.
pub fn subspace_ops(u: &Subspace, v: &Subspace, tol: &Tolerances) -> Result<SubspaceOps> {
    if u.ambient_dim != v.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "subspaces live in dimensions {} and {}",
            u.ambient_dim, v.ambient_dim
        )));
    }
    let n = u.ambient_dim;
    let cut = tol.tol_eq;

    let intersection = if u.dim() == 0 || v.dim() == 0 {
        Subspace::zero(n)
    } else {
        let id = identity(n);
        let mut stacked = CMatrix::zeros(2 * n, n);
        stacked.rows_mut(0, n).copy_from(&(&id - u.projector()));
        stacked.rows_mut(n, n).copy_from(&(&id - v.projector()));
        let svd = full_svd(&stacked);
        let k = svd.sigma.iter().filter(|&&s| s <= cut).count();
        let mut basis = svd.v.columns(n - k, k).into_owned();
        fix_phases(&mut basis);
        Subspace {
            ambient_dim: n,
            basis,
        }
    };

    let (du, dv) = (u.dim(), v.dim());
    let sum = if du + dv == 0 {
        Subspace::zero(n)
    } else {
        let mut joined = CMatrix::zeros(n, du + dv);
        joined.columns_mut(0, du).copy_from(&u.basis);
        joined.columns_mut(du, dv).copy_from(&v.basis);
        let svd = full_svd(&joined);
        let r = svd.sigma.iter().filter(|&&s| s > cut).count();
        let mut basis = svd.u.columns(0, r).into_owned();
        fix_phases(&mut basis);
        Subspace {
            ambient_dim: n,
            basis,
        }
    };

    Ok(SubspaceOps {
        intersection,
        sum,
        principal_angles: principal_angles(u, v),
    })
}

/// Largest principal angle; `π/2` when the dimensions differ.
pub fn subspace_distance(u: &Subspace, v: &Subspace) -> f64 {
    if u.ambient_dim != v.ambient_dim || u.dim() != v.dim() {
        return FRAC_PI_2;
    }
    principal_angles(u, v).last().copied().unwrap_or(0.0)
}
