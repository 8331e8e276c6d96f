//! Concrete examples and truncated infinite-dimensional experiments.

mod compact;
mod gallery;
mod sqrtless;
mod truncation;

pub use compact::compact_factor_truncation;
pub use gallery::{gallery, GalleryItem, GalleryName, GalleryParams};
pub use sqrtless::sqrtless_truncation;
pub use truncation::qs_not_sim_truncation;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub dim: usize,
    pub metric: String,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct LabResult {
    pub name: String,
    pub dims: Vec<usize>,
    pub metrics: Vec<MetricRow>,
    pub matrices: Vec<(String, CMatrix)>,
    pub verdicts: Vec<String>,
}

impl LabResult {
    fn new(name: &str, dims: &[usize]) -> Self {
        Self {
            name: name.into(),
            dims: dims.to_vec(),
            metrics: Vec::new(),
            matrices: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    fn push(&mut self, dim: usize, metric: &str, value: f64) {
        self.metrics.push(MetricRow {
            dim,
            metric: metric.into(),
            value,
        });
    }

    /// Values of one metric in dimension order.
    pub fn series(&self, metric: &str) -> Vec<f64> {
        self.metrics
            .iter()
            .filter(|r| r.metric == metric)
            .map(|r| r.value)
            .collect()
    }

    pub fn strictly_increasing(&self, metric: &str) -> bool {
        self.series(metric).windows(2).all(|w| w[1] > w[0])
    }

    pub fn nondecreasing(&self, metric: &str) -> bool {
        self.series(metric).windows(2).all(|w| w[1] >= w[0])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,metric,value\n");
        for r in &self.metrics {
            let _ = writeln!(out, "{},{},{:e}", r.dim, r.metric, r.value);
        }
        out
    }
}

/// Parameter schedule indexed from `k = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `first · ratio^(k-1)`.
    Geometric {
        first: f64,
        ratio: f64,
    },
    Constant(f64),
    Explicit(Vec<f64>),
}

impl Schedule {
    /// `θ_k = π / 2^k`.
    pub fn default_angles() -> Self {
        Schedule::Geometric {
            first: std::f64::consts::FRAC_PI_2,
            ratio: 0.5,
        }
    }

    /// `s_k = 4^{-k}`.
    pub fn default_weights() -> Self {
        Schedule::Geometric {
            first: 0.25,
            ratio: 0.25,
        }
    }

    pub fn take(&self, count: usize) -> Result<Vec<f64>> {
        match self {
            Schedule::Geometric { first, ratio } => {
                Ok((0..count).map(|k| first * ratio.powi(k as i32)).collect())
            }
            Schedule::Constant(v) => Ok(vec![*v; count]),
            Schedule::Explicit(values) if values.len() >= count => Ok(values[..count].to_vec()),
            Schedule::Explicit(values) => Err(Error::InvalidParams(format!(
                "schedule has {} values, {count} needed",
                values.len()
            ))),
        }
    }

    /// Takes `count` values and checks they are nonincreasing and lie in
    /// `(0, upper]` (or `(0, upper)` when `open`).
    fn take_checked(&self, count: usize, upper: f64, open: bool) -> Result<Vec<f64>> {
        let values = self.take(count)?;
        let inside = |v: f64| v > 0.0 && if open { v < upper } else { v <= upper };
        if let Some(v) = values.iter().find(|&&v| !v.is_finite() || !inside(v)) {
            return Err(Error::InvalidParams(format!(
                "schedule value {v} outside (0, {upper}{}",
                if open { ")" } else { "]" }
            )));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParams(
                "schedule must be nonincreasing".into(),
            ));
        }
        Ok(values)
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        let a = Schedule::default_angles().take(3).unwrap();
        assert_eq!(a[2], std::f64::consts::PI / 8.0);
        let s = Schedule::default_weights().take(2).unwrap();
        assert_eq!(s, vec![0.25, 0.0625]);
        assert!(Schedule::Explicit(vec![0.5]).take(2).is_err());
        assert!(Schedule::Explicit(vec![0.1, 0.2])
            .take_checked(2, 1.0, true)
            .is_err());
        assert!(Schedule::Constant(1.0).take_checked(2, 1.0, true).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut r = LabResult::new("x", &[2]);
        r.push(2, "kappa", 1.5);
        assert_eq!(r.to_csv(), "dim,metric,value\n2,kappa,1.5e0\n");
    }
}
