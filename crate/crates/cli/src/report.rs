use crate::matrix_io::write_matrix;
use posfact_core::{CMatrix, Error, Tolerances};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const SCHEMA: u32 = 1;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A verdict was computed and it is negative, e.g. not in the class.
    Negative,
    /// The requested object does not exist or could not be computed.
    Infeasible,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Negative => 2,
            Status::Infeasible => 3,
            Status::InputError => 4,
        }
    }

    pub fn of(err: &Error) -> Self {
        match err {
            Error::NotInClass(_) => Status::Negative,
            Error::Infeasible(_)
            | Error::RangeNotContained { .. }
            | Error::NotInvertible { .. }
            | Error::InvalidPerturbation(_)
            | Error::DomainError(_)
            | Error::NoConvergence(_) => Status::Infeasible,
            Error::NotSquare { .. }
            | Error::DimensionMismatch(_)
            | Error::InvalidMatrix(_)
            | Error::NotHermitian { .. }
            | Error::NotPsd { .. }
            | Error::UnknownName(_)
            | Error::InvalidParams(_)
            | Error::InvalidTolerances(_) => Status::InputError,
        }
    }
}

/// Row-major matrix with `[re, im]` pairs.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let data = (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
            .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
            .collect();
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    /// SHA-256 of the inputs (file contents, or the canonical parameters for
    /// generated objects).
    pub input_digest: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub verdicts: BTreeMap<String, Value>,
    pub witnesses: BTreeMap<String, MatrixJson>,
    pub residuals: BTreeMap<String, Residual>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub metrics: Vec<posfact_core::lab::MetricRow>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub runtime_ms: f64,
    #[serde(skip)]
    matrices: Vec<(String, CMatrix)>,
}

pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

impl Report {
    pub fn new(command: &str, input_digest: String, tol: Tolerances, seed: u64) -> Self {
        Self {
            schema: SCHEMA,
            command: command.into(),
            input_digest,
            status: Status::Ok,
            error: None,
            verdicts: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            residuals: BTreeMap::new(),
            metrics: Vec::new(),
            tolerances: tol,
            seed,
            runtime_ms: 0.0,
            matrices: Vec::new(),
        }
    }

    pub fn verdict(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.verdicts.insert(key.into(), v);
        self
    }

    pub fn witness(&mut self, key: &str, m: &CMatrix) -> &mut Self {
        self.witnesses.insert(key.into(), MatrixJson::from(m));
        self.matrices.retain(|(k, _)| k != key);
        self.matrices.push((key.into(), m.clone()));
        self
    }

    pub fn residual(&mut self, key: &str, value: f64, tolerance: f64) -> &mut Self {
        self.residuals.insert(
            key.into(),
            Residual {
                value,
                tolerance,
                pass: value <= tolerance,
            },
        );
        self
    }

    pub fn fail(&mut self, err: &Error) -> &mut Self {
        self.status = self.status.max(Status::of(err));
        self.error = Some(err.to_string());
        self
    }

    /// Witnesses in insertion order.
    pub fn matrices(&self) -> &[(String, CMatrix)] {
        &self.matrices
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "input_digest: {}", self.input_digest);
        let _ = writeln!(
            out,
            "status: {:?} (exit {})",
            self.status,
            self.status.code()
        );
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(out, "verdicts:");
            for (k, v) in &self.verdicts {
                let _ = writeln!(out, "  {k}: {v}");
            }
        }
        if !self.residuals.is_empty() {
            let _ = writeln!(out, "residuals:");
            for (k, r) in &self.residuals {
                let mark = if r.pass { "ok" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "  {k}: {:.3e} (tolerance {:.3e}) {mark}",
                    r.value, r.tolerance
                );
            }
        }
        if !self.metrics.is_empty() {
            let _ = writeln!(out, "metrics:");
            for r in &self.metrics {
                let _ = writeln!(out, "  n={:<4} {:<24} {:e}", r.dim, r.metric, r.value);
            }
        }
        for (name, m) in &self.matrices {
            out.push_str(&write_matrix(m, Some(&format!("witness {name}"))));
        }
        let _ = writeln!(out, "runtime_ms: {:.3}", self.runtime_ms);
        out
    }
}
