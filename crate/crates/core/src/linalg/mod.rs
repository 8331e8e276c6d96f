//! Dense complex linear-algebra kernel.
//!
//! Every operator is a [`CMatrix`], a dense `nalgebra` matrix over
//! double-precision complex scalars. The helpers here cover the small set of
//! primitives the rest of the crate builds on: norms, Hermitian repair,
//! full SVDs, projectors and the deterministic basis phase convention.

mod douglas;
mod eigen;
mod pinv;
mod psd;
mod subspace;

pub use douglas::douglas_solve;
pub use eigen::{
    eig_general, eig_hermitian, eigenbasis, split_eigenbasis, EigenCluster, Eigenbasis,
    SpectrumReport,
};
pub use pinv::pinv;
pub(crate) use psd::hermitian_apply;
pub use psd::{
    is_loewner_leq, min_eigenvalue, psd_function, psd_inverse, psd_pinv_sqrt, psd_sqrt, require_psd,
};
pub use subspace::{
    range_kernel, range_kernel_scaled, subspace_distance, subspace_ops, Subspace, SubspaceOps,
};

use crate::error::{Error, Result};
use crate::tol::Tolerances;
use nalgebra::DMatrix;
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Builds a matrix from row-major complex entries, rejecting empty shapes and
/// non-finite values.
pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<CMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidMatrix(format!("empty shape {rows}x{cols}")));
    }
    if entries.len() != rows * cols {
        return Err(Error::InvalidMatrix(format!(
            "expected {} entries for {rows}x{cols}, got {}",
            rows * cols,
            entries.len()
        )));
    }
    let m = CMatrix::from_row_slice(rows, cols, entries);
    check_finite(&m)?;
    Ok(m)
}

/// Promotes a row-major real array to a complex matrix.
///
/// Panics when `entries.len() != rows * cols`; intended for literals.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(
        entries.len(),
        rows * cols,
        "entry count does not match shape"
    );
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)))
}

/// Real diagonal matrix.
pub fn real_diag(values: &[f64]) -> CMatrix {
    let n = values.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = C64::new(v, 0.0);
    }
    m
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidMatrix("non-finite entry".into()))
    }
}

pub fn require_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub(crate) fn to_faer(m: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Singular values in descending order.
///
/// SVDs go through `faer`: nalgebra's complex SVD returns inaccurate factors
/// for some rank-deficient inputs.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv = to_faer(m)
        .singular_values()
        .expect("SVD iteration converges");
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Frobenius-norm distance between two matrices.
pub fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Symmetrizes `m`, failing when the anti-Hermitian part exceeds
/// `tol_eq * ‖m‖`.
pub fn checked_hermitian(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    require_square(m)?;
    let asymmetry = op_norm(&(m - m.adjoint())) * 0.5;
    let allowed = tol.tol_eq * op_norm(m).max(f64::MIN_POSITIVE);
    if asymmetry > allowed {
        return Err(Error::NotHermitian { asymmetry, allowed });
    }
    Ok(hermitian_part(m))
}

/// Orthogonal projector `U Uᴴ` onto the span of orthonormal columns.
pub fn projector(basis: &CMatrix) -> CMatrix {
    basis * basis.adjoint()
}

/// Scales `column` so that its first entry of largest modulus is real and
/// positive. Zero columns are left untouched.
pub(crate) fn fix_phase(mut column: nalgebra::DVectorViewMut<'_, C64>) {
    let max = column.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = column
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .expect("maximum exists");
    let z = column[pivot];
    let phase = z.conj() / z.norm();
    column.iter_mut().for_each(|x| *x *= phase);
}

/// Applies [`fix_phase`] to every column.
pub(crate) fn fix_phases(m: &mut CMatrix) {
    for j in 0..m.ncols() {
        fix_phase(m.column_mut(j));
    }
}

/// Full singular value decomposition `M = U Σ Vᴴ`.
///
/// Singular values come back in descending order. `u` and `v` are the full
/// square unitaries, so trailing columns of `v` span the kernel.
pub(crate) struct FullSvd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

pub(crate) fn full_svd(m: &CMatrix) -> FullSvd {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return FullSvd {
            u: identity(rows),
            sigma: Vec::new(),
            v: identity(cols),
        };
    }
    let svd = to_faer(m).svd().expect("SVD iteration converges");
    let s = svd.S().column_vector();
    let sigma: Vec<f64> = (0..rows.min(cols)).map(|i| s[i].re).collect();
    debug_assert!(sigma.windows(2).all(|w| w[0] >= w[1]));
    FullSvd {
        u: from_faer(svd.U()),
        sigma,
        v: from_faer(svd.V()),
    }
}

/// Numerical rank at a relative cutoff.
pub(crate) fn rank_of(sigma: &[f64], rel: f64) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rel * smax).count()
}

/// 2-norm condition number, `∞` for singular input.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    let (max, min) = (
        sv.first().copied().unwrap_or(0.0),
        sv.last().copied().unwrap_or(0.0),
    );
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Dense inverse, failing on numerically singular input.
pub(crate) fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone()
        .try_inverse()
        .filter(|inv| inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
        .ok_or(Error::NotInvertible {
            min_eigenvalue: 0.0,
            floor: 0.0,
        })
}

/// Embeds square blocks on the diagonal.
pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(*b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Assembles a 2x2 block matrix.
pub fn block2(a11: &CMatrix, a12: &CMatrix, a21: &CMatrix, a22: &CMatrix) -> CMatrix {
    let (r1, c1) = a11.shape();
    let (r2, c2) = a22.shape();
    let mut out = CMatrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a11);
    out.view_mut((0, c1), (r1, c2)).copy_from(a12);
    out.view_mut((r1, 0), (r2, c1)).copy_from(a21);
    out.view_mut((r1, c1), (r2, c2)).copy_from(a22);
    out
}

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
