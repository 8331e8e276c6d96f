use super::member_basis;
use crate::error::Result;
use crate::linalg::{identity, singular_values, CMatrix, C64};
use crate::tol::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct ResolventCertificate {
    /// `max ‖(T − λ)⁻¹‖ / (1 + |Im λ|⁻²)` over the samples.
    pub kappa: f64,
    /// `(|Im λ|, max ratio over the real parts)`, ascending in `|Im λ|`.
    pub profile: Vec<(f64, f64)>,
}

/// Sampled bound `‖(T − λ)⁻¹‖ ≤ κ·(1 + |Im λ|⁻²)`.
///
/// `samples` log-spaced values of `|Im λ|` in `[1e-6, 1]·‖T‖` are crossed with
/// `samples` real parts spread over `[−‖T‖, 2‖T‖]` (jittered by `seed`) plus the
/// real parts of the eigenvalues themselves.
pub fn resolvent_growth_certificate(
    t: &CMatrix,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ResolventCertificate> {
    let basis = member_basis(t, tol)?;
    let scale = if basis.report.norm > 0.0 {
        basis.report.norm
    } else {
        1.0
    };
    let samples = samples.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = 3.0 * scale / samples as f64;
    let mut reals: Vec<f64> = (0..samples)
        .map(|i| -scale + step * (i as f64 + rng.random::<f64>()))
        .collect();
    reals.extend(basis.report.clusters.iter().map(|c| c.eigenvalue.re));

    let imags: Vec<f64> = (0..samples)
        .map(|i| scale * 10f64.powf(-6.0 + 6.0 * i as f64 / (samples - 1) as f64))
        .collect();

    let n = t.nrows();
    let profile: Vec<(f64, f64)> = imags
        .par_iter()
        .map(|&y| {
            let worst = reals
                .iter()
                .map(|&x| {
                    let shifted = t - identity(n) * C64::new(x, y);
                    let smin = singular_values(&shifted).last().copied().unwrap_or(0.0);
                    (1.0 / smin) / (1.0 + y.powi(-2))
                })
                .fold(0.0, f64::max);
            (y, worst)
        })
        .collect();
    let kappa = profile.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(ResolventCertificate { kappa, profile })
}
