//! Seeded random generators for test and benchmark corpora.

use crate::linalg::{block_diag, hermitian_part, op_norm, real_diag, CMatrix, Subspace, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Member `T = G·diag(values)·G⁻¹` with its known eigen-structure.
#[derive(Debug, Clone)]
pub struct Member {
    pub t: CMatrix,
    pub g: CMatrix,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn dim(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Entries with independent standard normal real and imaginary parts.
    pub fn gaussian(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            C64::new(
                self.rng.sample(StandardNormal),
                self.rng.sample(StandardNormal),
            )
        })
    }

    pub fn unitary(&mut self, n: usize) -> CMatrix {
        self.gaussian(n, n).qr().q()
    }

    /// `X·Xᴴ` with `X` Gaussian `n × rank`, scaled to norm one.
    pub fn psd(&mut self, n: usize, rank: usize) -> CMatrix {
        let x = self.gaussian(n, rank);
        let m = &x * x.adjoint();
        let norm = op_norm(&m);
        if norm > 0.0 {
            hermitian_part(&(m / C64::new(norm, 0.0)))
        } else {
            m
        }
    }

    /// PSD matrix with a random rank in `1..=n`.
    pub fn psd_any_rank(&mut self, n: usize) -> CMatrix {
        let rank = self.dim(1, n);
        self.psd(n, rank)
    }

    /// Positive definite matrix with eigenvalues in `[lo, 1]`.
    pub fn pd(&mut self, n: usize, lo: f64) -> CMatrix {
        let u = self.unitary(n);
        let values: Vec<f64> = (0..n).map(|_| self.uniform(lo, 1.0)).collect();
        hermitian_part(&(&u * real_diag(&values) * u.adjoint()))
    }

    /// Invertible `G = U·diag(σ)·V` with `σ` log-uniform in `[1, cond]`.
    pub fn conditioned(&mut self, n: usize, cond: f64) -> CMatrix {
        let u = self.unitary(n);
        let v = self.unitary(n);
        let sigma: Vec<f64> = (0..n).map(|_| cond.powf(self.uniform(0.0, 1.0))).collect();
        u * real_diag(&sigma) * v
    }

    /// `(A, B, A·B)` with `A`, `B` random PSD of random ranks.
    pub fn product(&mut self, n: usize) -> (CMatrix, CMatrix, CMatrix) {
        let a = self.psd_any_rank(n);
        let b = self.psd_any_rank(n);
        let t = &a * &b;
        (a, b, t)
    }

    fn assemble(&mut self, values: Vec<f64>, cond: f64) -> Member {
        let n = values.len();
        let g = self.conditioned(n, cond);
        let g_inv = g
            .clone()
            .try_inverse()
            .expect("conditioned matrix is invertible");
        let t = &g * real_diag(&values) * g_inv;
        Member { t, g, values }
    }

    /// Member with eigenvalue condition at most `cond`; each eigenvalue is zero
    /// with probability 0.3 and otherwise uniform in `[0.1, 2]`.
    pub fn member(&mut self, n: usize, cond: f64) -> Member {
        let values = (0..n)
            .map(|_| {
                if self.rng.random_bool(0.3) {
                    0.0
                } else {
                    self.uniform(0.1, 2.0)
                }
            })
            .collect();
        self.assemble(values, cond)
    }

    /// Nonzero member whose spectrum takes at most three distinct values (one
    /// of them possibly zero), so eigenvalues repeat.
    pub fn clustered_member(&mut self, n: usize, cond: f64) -> Member {
        let distinct = self.dim(1, 3.min(n));
        let levels: Vec<f64> = (0..distinct)
            .map(|i| {
                if i == 0 && distinct > 1 && self.rng.random_bool(0.5) {
                    0.0
                } else {
                    0.25 + 0.5 * i as f64 + self.uniform(0.0, 0.2)
                }
            })
            .collect();
        let values = (0..n)
            .map(|_| levels[self.rng.random_range(0..distinct)])
            .collect();
        self.assemble(values, cond)
    }

    pub fn subspace(&mut self, n: usize, k: usize) -> Subspace {
        let q = self.unitary(n);
        Subspace {
            ambient_dim: n,
            basis: q.columns(0, k).into_owned(),
        }
    }

    /// Orthoprojection onto a random subspace of random dimension.
    pub fn projection(&mut self, n: usize) -> CMatrix {
        let k = self.dim(0, n);
        self.subspace(n, k).projector()
    }

    /// Idempotent with range and kernel of random complementary dimensions.
    pub fn oblique_projection(&mut self, n: usize, cond: f64) -> CMatrix {
        let k = self.dim(0, n);
        let ones = vec![1.0; k];
        let zeros = vec![0.0; n - k];
        let diag = block_diag(&[&real_diag(&ones), &real_diag(&zeros)]);
        let g = self.conditioned(n, cond);
        let g_inv = g
            .clone()
            .try_inverse()
            .expect("conditioned matrix is invertible");
        g * diag * g_inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{condition_number, dist};

    #[test]
    fn seeded_and_reproducible() {
        let a = Corpus::new(5).member(4, 10.0);
        let b = Corpus::new(5).member(4, 10.0);
        assert_eq!(a.t, b.t);
    }

    #[test]
    fn generated_objects_have_their_properties() {
        let mut c = Corpus::new(11);
        let g = c.conditioned(5, 100.0);
        assert!(condition_number(&g) <= 100.0 * (1.0 + 1e-10));
        let p = c.psd(4, 2);
        assert!((op_norm(&p) - 1.0).abs() < 1e-12);
        assert_eq!(
            p.symmetric_eigenvalues()
                .iter()
                .filter(|&&v| v > 1e-10)
                .count(),
            2
        );
        let q = c.oblique_projection(4, 10.0);
        assert!(dist(&(&q * &q), &q) < 1e-10);
        let m = c.clustered_member(6, 10.0);
        let mut distinct = m.values.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        assert!(distinct.len() <= 3);
    }
}
