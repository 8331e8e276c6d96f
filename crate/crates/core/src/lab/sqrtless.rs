use super::{flag, LabResult, Schedule};
use crate::calculus::sqrt_l2p;
use crate::error::{Error, Result};
use crate::linalg::{block2, identity, op_norm, real_diag, CMatrix};
use crate::membership::is_l2p;
use crate::tol::Tolerances;
use rayon::prelude::*;

/// Explicit pair `(A, B)` with `A` the orthoprojection
/// `[[S, √(S(1−S))], [√(S(1−S)), 1−S]]` and `B = diag(1, 0) + P_{ker A}`,
/// together with `T = A·diag(1, 0) = [[S, 0], [√(S(1−S)), 0]]`.
pub(crate) fn sqrtless_member(s: &[f64]) -> (CMatrix, CMatrix, CMatrix) {
    let n = s.len();
    let diag = |f: &dyn Fn(f64) -> f64| real_diag(&s.iter().map(|&v| f(v)).collect::<Vec<_>>());
    let s_mat = diag(&|v| v);
    let cross = diag(&|v| (v * (1.0 - v)).sqrt());
    let rest = diag(&|v| 1.0 - v);
    let zero = CMatrix::zeros(n, n);
    let a = block2(&s_mat, &cross, &cross, &rest);
    let t = block2(&s_mat, &zero, &cross, &zero);
    let kernel = block2(&rest, &(-&cross), &(-&cross), &s_mat);
    let b = block2(&identity(n), &zero, &zero, &zero) + kernel;
    (t, a, b)
}

/// Truncations of a member without a square root in the class. Every finite
/// truncation has one, but the invertible factor used to build it degenerates
/// as `min s_k → 0`.
///
/// Metrics per `n` (the matrices are `2n × 2n`): `witness_inverse_norm`
/// (`‖B⁻¹‖`), `min_s`, `in_l2p`, `sqrt_found`, `sqrt_residual`
/// (`‖R² − T‖/‖T‖`, NaN when no root was produced).
pub fn sqrtless_truncation(
    dims: &[usize],
    weights: &Schedule,
    tol: &Tolerances,
) -> Result<LabResult> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidParams("dimensions must be positive".into()));
    }
    let largest = dims.iter().max().copied().unwrap_or(0);
    let s = weights.take_checked(largest, 1.0, true)?;

    let rows: Vec<Result<Vec<(&str, f64)>>> = dims
        .par_iter()
        .map(|&n| {
            let (t, _, b) = sqrtless_member(&s[..n]);
            let lambda_min = b.symmetric_eigenvalues().min();
            let verdict = is_l2p(&t, tol)?;
            let root = sqrt_l2p(&t, tol).ok();
            let residual = root
                .as_ref()
                .map_or(f64::NAN, |r| op_norm(&(r * r - &t)) / op_norm(&t));
            Ok(vec![
                ("witness_inverse_norm", 1.0 / lambda_min),
                ("min_s", s[n - 1]),
                ("in_l2p", flag(verdict.in_l2p)),
                ("sqrt_found", flag(root.is_some())),
                ("sqrt_residual", residual),
            ])
        })
        .collect();

    let mut out = LabResult::new("sqrtless", dims);
    for (&n, row) in dims.iter().zip(rows) {
        for (name, value) in row? {
            out.push(n, name, value);
        }
    }
    out.verdicts.push(format!(
        "witness inverse norm strictly increasing: {}",
        out.strictly_increasing("witness_inverse_norm")
    ));
    let found = out
        .series("sqrt_found")
        .iter()
        .filter(|&&v| v == 1.0)
        .count();
    out.verdicts.push(format!(
        "square roots certified at tolerance: {found} of {}",
        dims.len()
    ));
    Ok(out)
}
