//! Members as corners of larger, more structured operators.

use crate::error::Result;
use crate::factorization::optimal_pair;
use crate::linalg::{
    block2, block_diag, hermitian_apply, hermitian_part, identity, op_norm, CMatrix, Subspace, C64,
};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DilationStage {
    /// Positive matrix times an orthoprojection.
    PosProj,
    /// Product of two orthoprojections.
    ProjProj,
}

#[derive(Debug, Clone)]
pub struct Dilation {
    /// `left · right`.
    pub ambient: CMatrix,
    pub left: CMatrix,
    pub right: CMatrix,
    /// Image of the original space; its coordinates come first.
    pub embed: Subspace,
    /// `T = scale · embedᴴ·ambient·embed`.
    pub scale: f64,
    pub stage: DilationStage,
    /// Largest of `‖P² − P‖`, `‖P − Pᴴ‖` over the factors that must be
    /// orthoprojections.
    pub projection_residual: f64,
    /// `‖scale · corner − T‖`.
    pub corner_residual: f64,
}

impl Dilation {
    pub fn corner(&self) -> CMatrix {
        self.embed.basis.adjoint() * &self.ambient * &self.embed.basis
    }
}

fn leading(ambient_dim: usize, n: usize) -> Subspace {
    let mut basis = CMatrix::zeros(ambient_dim, n);
    basis.view_mut((0, 0), (n, n)).fill_with_identity();
    Subspace { ambient_dim, basis }
}

fn projection_defect(p: &CMatrix) -> f64 {
    op_norm(&(p * p - p)).max(op_norm(&(p - p.adjoint())))
}

/// `([[B, R], [R, 1 − B]], R = B^{1/2}(1 − B)^{1/2})` for `0 ⪯ B ⪯ 1`: an
/// orthoprojection because its first block column is an isometry.
fn projection_lift(b: &CMatrix) -> Result<CMatrix> {
    let n = b.nrows();
    let cross = hermitian_apply(b, |v| {
        let v = v.min(1.0);
        (v * (1.0 - v)).sqrt()
    })?;
    let complement = hermitian_part(&(identity(n) - b));
    Ok(block2(b, &cross, &cross, &complement))
}

/// Lifts the pair `(X, Y)` with `Y ⪯ 1` to `(X ⊕ 0) · Ỹ`.
fn lift_pair(x: &CMatrix, y: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let zero = CMatrix::zeros(x.nrows(), x.ncols());
    Ok((block_diag(&[x, &zero]), projection_lift(y)?))
}

/// `T` as the corner of `Ã·B̃` with `Ã` positive and `B̃` an orthoprojection.
pub fn dilate_pos_proj(t: &CMatrix, tol: &Tolerances) -> Result<Dilation> {
    let pair = optimal_pair(t, tol)?;
    let s = op_norm(&pair.b).max(1.0);
    let a = &pair.a * C64::new(s, 0.0);
    let b = &pair.b / C64::new(s, 0.0);
    let (left, right) = lift_pair(&a, &b)?;
    let ambient = &left * &right;
    let n = t.nrows();
    let mut out = Dilation {
        ambient,
        projection_residual: projection_defect(&right),
        left,
        right,
        embed: leading(2 * n, n),
        scale: 1.0,
        stage: DilationStage::PosProj,
        corner_residual: 0.0,
    };
    out.corner_residual = op_norm(&(out.corner() - t));
    Ok(out)
}

/// `T` as a scaled corner of a product of two orthoprojections.
///
/// With `T' = Ã·B̃` from [`dilate_pos_proj`] and `c = 1/max(1, ‖Ã‖)`, the pair
/// `(B̃, c·Ã)` is lifted again to `S = (B̃ ⊕ 0)·(c·Ã)~`, whose leading block is
/// `c·T'ᴴ`. The ambient is `Sᴴ`, so `T = c⁻¹ ·` its leading `n × n` block.
pub fn dilate_proj_proj(t: &CMatrix, tol: &Tolerances) -> Result<Dilation> {
    let first = dilate_pos_proj(t, tol)?;
    let c = 1.0 / op_norm(&first.left).max(1.0);
    let (x, y) = lift_pair(&first.right, &(&first.left * C64::new(c, 0.0)))?;
    let n = t.nrows();
    // Sᴴ = Ỹ·X̃ since both factors are Hermitian.
    let ambient = &y * &x;
    let mut out = Dilation {
        ambient,
        projection_residual: projection_defect(&x).max(projection_defect(&y)),
        left: y,
        right: x,
        embed: leading(4 * n, n),
        scale: 1.0 / c,
        stage: DilationStage::ProjProj,
        corner_residual: 0.0,
    };
    out.corner_residual = op_norm(&(out.corner() * C64::new(out.scale, 0.0) - t));
    Ok(out)
}

/// `‖(1 − P)·M·P‖` for `P` the projector onto the leading `k` coordinates.
pub fn invariance_defect(m: &CMatrix, k: usize) -> f64 {
    let n = m.nrows();
    op_norm(&m.view((k, 0), (n - k, k)).into_owned())
}
