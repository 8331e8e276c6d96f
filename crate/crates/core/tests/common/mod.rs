//! Independent oracles built on nalgebra Hermitian eigen and Schur
//! decompositions.
#![allow(dead_code)]

use posfact_core::{CMatrix, C64};

/// Singular triplets from the Hermitian dilation `[[0, M], [Mᴴ, 0]]`, whose
/// eigenpairs are `±σ` with eigenvectors `(u, ±v)/√2`. Returns every
/// `σ ≥ 0` in descending order together with the triplets above `cut`.
fn dilation_svd(m: &CMatrix, cut: f64) -> (Vec<f64>, Vec<f64>, CMatrix, CMatrix) {
    let (r, c) = m.shape();
    let mut h = CMatrix::zeros(r + c, r + c);
    h.view_mut((0, r), (r, c)).copy_from(m);
    h.view_mut((r, 0), (c, r)).copy_from(&m.adjoint());
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..r + c).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let sigma: Vec<f64> = order[..r.min(c)]
        .iter()
        .map(|&i| eig.eigenvalues[i].max(0.0))
        .collect();
    let keep: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| eig.eigenvalues[i] > cut)
        .collect();
    let kept = keep.iter().map(|&i| eig.eigenvalues[i]).collect();
    let root2 = C64::new(2f64.sqrt(), 0.0);
    let u = CMatrix::from_fn(r, keep.len(), |i, k| eig.eigenvectors[(i, keep[k])] * root2);
    let v = CMatrix::from_fn(c, keep.len(), |i, k| {
        eig.eigenvectors[(r + i, keep[k])] * root2
    });
    (sigma, kept, u, v)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    dilation_svd(m, f64::INFINITY).0
}

pub fn norm2(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// `f` applied to the eigenvalues of a Hermitian matrix.
pub fn herm_fn(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|v| C64::new(f(v), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Square root with eigenvalues below `1e-12·λmax` treated as exact zeros.
pub fn sqrt_psd(m: &CMatrix) -> CMatrix {
    let top = m.symmetric_eigenvalues().max().max(0.0);
    herm_fn(m, |v| if v > 1e-12 * top { v.sqrt() } else { 0.0 })
}

pub fn min_eig(m: &CMatrix) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().min()
}

/// Pseudo-inverse with cutoff `rel·σmax`.
pub fn pinv(m: &CMatrix, rel: f64) -> CMatrix {
    let (_, sigma, u, v) = dilation_svd(m, rel * norm2(m));
    let mut out = CMatrix::zeros(m.ncols(), m.nrows());
    for k in 0..u.ncols() {
        out += (v.column(k) * u.column(k).adjoint()) * C64::new(sigma[k].recip(), 0.0);
    }
    out
}

/// Orthonormal basis of the range (left singular vectors above `rel·σmax`).
pub fn range_basis(m: &CMatrix, rel: f64) -> CMatrix {
    let u = dilation_svd(m, rel * norm2(m)).2;
    // Re-orthonormalise: the dilation leaves `u` orthonormal only up to
    // rounding in the pairing of ±σ.
    if u.ncols() == 0 {
        u
    } else {
        u.qr().q()
    }
}

pub fn range_projector(m: &CMatrix, rel: f64) -> CMatrix {
    let u = range_basis(m, rel);
    &u * u.adjoint()
}

/// Eigenvalues of a general matrix from the complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<C64> {
    let n = m.nrows();
    [1.0, 8.0, 64.0]
        .iter()
        .find_map(|k| m.clone().try_schur(k * f64::EPSILON, 10_000 * n))
        .expect("Schur iteration converges")
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

/// Number of singular values at or below `abs`.
pub fn nullity(m: &CMatrix, abs: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s <= abs).count()
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns `u`.
pub fn complement_basis(u: &CMatrix) -> CMatrix {
    let n = u.nrows();
    let p = CMatrix::identity(n, n) - u * u.adjoint();
    // `p` is an orthoprojection: its eigenvalues are 0 or 1.
    let eig = ((&p + p.adjoint()) * C64::new(0.5, 0.0)).symmetric_eigen();
    let cols: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    CMatrix::from_fn(n, cols.len(), |r, c| eig.eigenvectors[(r, cols[c])])
}
