use super::{flag, LabResult};
use crate::error::{Error, Result};
use crate::linalg::{
    condition_number, douglas_solve, inverse, is_loewner_leq, op_norm, real_diag, CMatrix, C64,
};
use crate::membership::classify_subclass;
use crate::tol::Tolerances;
use std::f64::consts::FRAC_PI_2;

/// Columns of every eigenspace block. Block 0 is spanned by the first `d₀`
/// coordinates; column `j` of a later block is `cos θ·e_own + sin θ·e_{j mod d₀}`
/// with `e_own` a fresh coordinate.
fn block_columns(block_dims: &[usize], angle: f64) -> CMatrix {
    let total: usize = block_dims.iter().sum();
    let first = block_dims[0];
    let mut e = CMatrix::zeros(total, total);
    let mut col = 0;
    for (b, &d) in block_dims.iter().enumerate() {
        for j in 0..d {
            if b == 0 {
                e[(col, col)] = C64::new(1.0, 0.0);
            } else {
                e[(col, col)] = C64::new(angle.cos(), 0.0);
                e[(j % first, col)] += C64::new(angle.sin(), 0.0);
            }
            col += 1;
        }
    }
    e
}

/// Finite section of the construction of a member from eigenspaces `H_n`
/// with eigenvalues `λ_n`: `X = [α_n·E_n]`, `α_n = √λ_n`, `C = ⊕ λ_n`,
/// `T = X·C·X⁻¹`, factored as `T = (X·Xᴴ)·(Z·Zᴴ)` with `Xᴴ·Z = C^{1/2}`.
///
/// `angle` is the tilt of every later block towards block 0; `0` gives
/// orthogonal blocks, `π/2` makes them dependent.
pub fn compact_factor_truncation(
    lambdas: &[f64],
    block_dims: &[usize],
    angle: f64,
    tol: &Tolerances,
) -> Result<LabResult> {
    if lambdas.is_empty() || lambdas.len() != block_dims.len() {
        return Err(Error::InvalidParams(
            "need one block dimension per eigenvalue".into(),
        ));
    }
    if lambdas.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
        return Err(Error::InvalidParams("eigenvalues must be positive".into()));
    }
    if block_dims.contains(&0) {
        return Err(Error::InvalidParams(
            "block dimensions must be at least 1".into(),
        ));
    }
    if !(0.0..=FRAC_PI_2).contains(&angle) {
        return Err(Error::InvalidParams(format!(
            "angle {angle} outside [0, π/2]"
        )));
    }

    let e = block_columns(block_dims, angle);
    let dim = e.nrows();
    let cond = condition_number(&e);
    if !(cond <= tol.cond_max) {
        return Err(Error::InvalidParams(format!(
            "blocks are linearly dependent (condition {cond:.3e})"
        )));
    }
    let per_column = |f: &dyn Fn(f64) -> f64| {
        let values: Vec<f64> = lambdas
            .iter()
            .zip(block_dims)
            .flat_map(|(&l, &d)| std::iter::repeat(f(l)).take(d))
            .collect();
        real_diag(&values)
    };
    let c = per_column(&|l| l);
    let c_root = per_column(&f64::sqrt);
    let x = &e * &c_root;
    let t = &x * &c * inverse(&x)?;

    let scale = op_norm(&t).max(op_norm(&x) * op_norm(&c));
    let intertwining = op_norm(&(&t * &x - &x * &c)) / scale;
    let gram_dominates = is_loewner_leq(&c, &(x.adjoint() * &x), tol);
    let z = douglas_solve(&x.adjoint(), &c_root, tol)?;
    let a = &x * x.adjoint();
    let b = &z * z.adjoint();
    let residual = op_norm(&(&a * &b - &t)) / op_norm(&t);
    let verdict = classify_subclass(&t, tol)?;

    let mut out = LabResult::new("compact_factor", &[dim]);
    out.push(
        dim,
        "sum_sqrt_lambda",
        lambdas.iter().map(|l| l.sqrt()).sum(),
    );
    out.push(dim, "block_condition", cond);
    out.push(dim, "intertwining_residual", intertwining);
    out.push(dim, "gram_dominates", flag(gram_dominates));
    out.push(dim, "factorization_residual", residual);
    out.push(dim, "in_l2p", flag(verdict.in_l2p));
    out.verdicts
        .push(format!("subclass: {:?}", verdict.subclass));
    out.verdicts.push(format!(
        "T = (X·Xᴴ)·(Z·Zᴴ) with relative residual {residual:.3e}"
    ));
    out.matrices = vec![
        ("T".into(), t),
        ("X".into(), x),
        ("A".into(), a),
        ("B".into(), b),
    ];
    Ok(out)
}
