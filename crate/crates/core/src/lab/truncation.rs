use super::{flag, LabResult, Schedule};
use crate::error::{Error, Result};
use crate::linalg::{identity, split_eigenbasis, subspace_ops, CMatrix, Subspace, C64};
use crate::membership::{is_l2p, Confidence};
use crate::tol::Tolerances;
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;

/// `T_n = P_M · P_{N⊥}` with `M` the first half of the coordinates and `N`
/// spanned by `cos θ_k·e_k + sin θ_k·f_k`.
pub(crate) fn pair_of_projections(angles: &[f64]) -> (CMatrix, Subspace, Subspace) {
    let m = angles.len();
    let n = 2 * m;
    let mut p_m = CMatrix::zeros(n, n);
    p_m.view_mut((0, 0), (m, m)).fill_with_identity();
    let mut n_basis = CMatrix::zeros(n, m);
    for (k, &theta) in angles.iter().enumerate() {
        n_basis[(k, k)] = C64::new(theta.cos(), 0.0);
        n_basis[(m + k, k)] = C64::new(theta.sin(), 0.0);
    }
    let p_n_perp = identity(n) - &n_basis * n_basis.adjoint();
    let mut m_basis = CMatrix::zeros(n, m);
    m_basis.view_mut((0, 0), (m, m)).fill_with_identity();
    let sub = |basis| Subspace {
        ambient_dim: n,
        basis,
    };
    (p_m * p_n_perp, sub(m_basis), sub(n_basis))
}

/// Truncations of a member that is quasi-similar but not similar to a
/// positive operator. The diagonalizing similarity degenerates as the angle
/// between `M` and `N` closes.
///
/// Metrics per dimension: `kappa` (condition number of the normalized
/// eigenvector matrix), `min_angle`, `lower_bound = 1/sin θ_{n/2}`,
/// `in_l2p`, `near_boundary`, `spectrum_min`, `spectrum_max`.
pub fn qs_not_sim_truncation(
    dims: &[usize],
    angles: &Schedule,
    tol: &Tolerances,
) -> Result<LabResult> {
    if dims.is_empty() || dims.iter().any(|&n| n == 0 || n % 2 == 1) {
        return Err(Error::InvalidParams(
            "dimensions must be positive and even".into(),
        ));
    }
    let largest = dims.iter().max().copied().unwrap_or(0);
    let theta = angles.take_checked(largest / 2, FRAC_PI_2, false)?;

    let rows: Vec<Result<Vec<(&str, f64)>>> = dims
        .par_iter()
        .map(|&n| {
            let (t, m, nn) = pair_of_projections(&theta[..n / 2]);
            let basis = split_eigenbasis(&t, tol)?;
            let ops = subspace_ops(&m, &nn, tol)?;
            let min_angle = ops.principal_angles.first().copied().unwrap_or(FRAC_PI_2);
            let verdict = is_l2p(&t, tol)?;
            let eigs: Vec<f64> = basis.values.iter().map(|z| z.re).collect();
            Ok(vec![
                ("kappa", basis.report.eigvec_cond),
                ("min_angle", min_angle),
                ("lower_bound", 1.0 / theta[n / 2 - 1].sin()),
                ("in_l2p", flag(verdict.in_l2p)),
                (
                    "near_boundary",
                    flag(verdict.confidence == Confidence::NearBoundary),
                ),
                (
                    "spectrum_min",
                    eigs.iter().copied().fold(f64::INFINITY, f64::min),
                ),
                (
                    "spectrum_max",
                    eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ),
            ])
        })
        .collect();

    let mut out = LabResult::new("qs_not_sim", dims);
    for (&n, row) in dims.iter().zip(rows) {
        for (name, value) in row? {
            out.push(n, name, value);
        }
    }
    out.verdicts.push(format!(
        "kappa strictly increasing: {}",
        out.strictly_increasing("kappa")
    ));
    let members = out.series("in_l2p").iter().filter(|&&v| v == 1.0).count();
    out.verdicts.push(format!(
        "certified members at tolerance: {members} of {}",
        dims.len()
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_case_is_well_conditioned() {
        let tol = Tolerances::default();
        let r = qs_not_sim_truncation(&[4, 8], &Schedule::Constant(FRAC_PI_2), &tol).unwrap();
        assert!(r.series("kappa").iter().all(|&k| (k - 1.0).abs() < 1e-12));
        assert!(r.series("in_l2p").iter().all(|&v| v == 1.0));
    }

    #[test]
    fn default_schedule_diverges() {
        let tol = Tolerances::default();
        let r = qs_not_sim_truncation(&[4, 8, 16], &Schedule::default_angles(), &tol).unwrap();
        assert!(r.strictly_increasing("kappa"));
        // κ = cot(θ_min / 2) for two orthonormal blocks at principal angle θ_min.
        let theta = std::f64::consts::PI / 4.0;
        assert!((r.series("kappa")[0] - 1.0 / (theta / 2.0).tan()).abs() < 1e-9);
        let lo = r.series("spectrum_min")[0];
        let hi = r.series("spectrum_max")[0];
        assert!(lo >= -1e-12 && hi <= 1.0 + 1e-12);
    }

    #[test]
    fn odd_dimension_is_rejected() {
        let tol = Tolerances::default();
        assert!(qs_not_sim_truncation(&[3], &Schedule::default_angles(), &tol).is_err());
        assert!(qs_not_sim_truncation(&[4], &Schedule::Constant(2.0), &tol).is_err());
    }
}
