use crate::matrix_io::parse_matrix;
use crate::report::{digest, Report, Status};
use posfact_core::calculus::{
    borel_calculus, mp_inverse_l2p, resolvent_growth_certificate, sqrt_l2p,
};
use posfact_core::dilation::{dilate_pos_proj, dilate_proj_proj, DilationStage};
use posfact_core::factorization::{invertible_factor_pair, schur_complement, sebestyen_solve};
use posfact_core::lab::{
    compact_factor_truncation, gallery, qs_not_sim_truncation, sqrtless_truncation, GalleryName,
    GalleryParams, LabResult, Schedule,
};
use posfact_core::linalg::{eig_general, min_eigenvalue, op_norm};
use posfact_core::membership::proj_proj_residual;
use posfact_core::{
    classify_subclass, optimal_pair, CMatrix, Error, Factorization, Subspace, Tolerances, TOL_ANGLE,
};
use std::path::Path;

/// Everything a command needs besides its own arguments.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub tol: Tolerances,
    pub seed: u64,
}

/// Failure before any report could be started (unreadable or malformed
/// input).
#[derive(Debug)]
pub struct InputError(pub String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

pub struct Input {
    pub matrix: CMatrix,
    pub bytes: Vec<u8>,
}

pub fn read_input(path: &Path) -> Result<Input, InputError> {
    let bytes = std::fs::read(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| InputError(format!("{} is not UTF-8 text", path.display())))?;
    let matrix = parse_matrix(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(Input { matrix, bytes })
}

fn scale_of(t: &CMatrix) -> f64 {
    op_norm(t).max(f64::MIN_POSITIVE)
}

fn certify_pair(report: &mut Report, t: &CMatrix, pair: &Factorization, tol: &Tolerances) {
    report
        .witness("A", &pair.a)
        .witness("B", &pair.b)
        .residual("product", pair.residual, tol.tol_eq * scale_of(t))
        .residual("range_match", pair.range_match, TOL_ANGLE)
        .residual("kernel_match", pair.kernel_match, TOL_ANGLE)
        .verdict("optimal", pair.optimal);
}

pub fn analyze(input: &Input, resolvent_samples: usize, cx: Context) -> Report {
    let tol = &cx.tol;
    let t = &input.matrix;
    let mut report = Report::new("analyze", digest(&[&input.bytes]), cx.tol, cx.seed);
    let spectrum = match eig_general(t, tol) {
        Ok(s) => s,
        Err(e) => {
            report.fail(&e);
            return report;
        }
    };
    let eigenvalues: Vec<_> = spectrum
        .clusters
        .iter()
        .map(|c| {
            serde_json::json!({
                "re": c.eigenvalue.re,
                "im": c.eigenvalue.im,
                "algebraic": c.algebraic_mult,
                "geometric": c.geometric_mult,
            })
        })
        .collect();
    report
        .verdict("eigenvalues", eigenvalues)
        .verdict("diagonalizable", spectrum.diagonalizable)
        .verdict("spectrum_nonneg", spectrum.spectrum_nonneg)
        .verdict("eigvec_cond", spectrum.eigvec_cond);
    let verdict = match classify_subclass(t, tol) {
        Ok(v) => v,
        Err(e) => {
            report.fail(&e);
            return report;
        }
    };
    report
        .verdict("in_l2p", verdict.in_l2p)
        .verdict("subclass", verdict.subclass)
        .verdict("confidence", verdict.confidence)
        .verdict("reason", &verdict.reason);
    let (pp, pp_tol) = proj_proj_residual(t, tol);
    report.residual("proj_proj_identity", pp, pp_tol);
    if let Some(w) = &verdict.witness {
        certify_pair(&mut report, t, w, tol);
    }
    if !verdict.in_l2p {
        report.status = Status::Negative;
        return report;
    }
    if resolvent_samples > 0 {
        match resolvent_growth_certificate(t, resolvent_samples, cx.seed, tol) {
            Ok(c) => {
                report.verdict("resolvent_kappa", c.kappa);
            }
            Err(e) => {
                report.fail(&e);
            }
        }
    }
    report
}

pub fn factor(input: &Input, invertible_b: bool, cx: Context) -> Report {
    let tol = &cx.tol;
    let t = &input.matrix;
    let mut report = Report::new("factor", digest(&[&input.bytes]), cx.tol, cx.seed);
    let pair = if invertible_b {
        invertible_factor_pair(t, tol)
    } else {
        optimal_pair(t, tol)
    };
    match pair {
        Ok(pair) => {
            certify_pair(&mut report, t, &pair, tol);
            if invertible_b {
                report.verdict("b_min_eigenvalue", min_eigenvalue(&pair.b));
            }
        }
        Err(e) => {
            report.fail(&e);
        }
    }
    report
}

pub fn solve(a: &Input, t: &Input, cx: Context) -> Report {
    let tol = &cx.tol;
    let mut report = Report::new("solve", digest(&[&a.bytes, &t.bytes]), cx.tol, cx.seed);
    match sebestyen_solve(&a.matrix, &t.matrix, tol) {
        Ok(s) => {
            report
                .verdict("lambda", s.lambda)
                .witness("X", &s.x)
                .residual(
                    "solution",
                    s.residual,
                    tol.tol_eq * s.scale.max(f64::MIN_POSITIVE),
                )
                .residual("kernel_angle", s.kernel_angle, TOL_ANGLE)
                .residual("schur_norm", s.schur_norm, tol.tol_eq * scale_of(&s.x));
        }
        Err(e) => {
            report.fail(&e);
        }
    }
    report
}

pub fn schur(b: &Input, subspace: &Input, cx: Context) -> Report {
    let tol = &cx.tol;
    let mut report = Report::new(
        "schur",
        digest(&[&b.bytes, &subspace.bytes]),
        cx.tol,
        cx.seed,
    );
    if subspace.matrix.nrows() != b.matrix.nrows() {
        report.fail(&Error::DimensionMismatch(format!(
            "subspace basis has {} rows, matrix has {}",
            subspace.matrix.nrows(),
            b.matrix.nrows()
        )));
        return report;
    }
    let s = Subspace::span(&subspace.matrix, tol);
    match schur_complement(&b.matrix, &s, tol) {
        Ok(pair) => {
            let scale = scale_of(&b.matrix);
            let leak = op_norm(&(s.basis.adjoint() * &pair.complement));
            report
                .verdict("subspace_dim", s.dim())
                .verdict("contraction_norm", pair.contraction_norm)
                .witness("complement", &pair.complement)
                .witness("compression", &pair.compression)
                .residual(
                    "complement_psd",
                    (-min_eigenvalue(&pair.complement)).max(0.0),
                    tol.tol_psd * scale,
                )
                .residual(
                    "below_b",
                    (-min_eigenvalue(&(&b.matrix - &pair.complement))).max(0.0),
                    tol.tol_psd * scale,
                )
                .residual("range_in_complement", leak, tol.tol_eq * scale);
        }
        Err(e) => {
            report.fail(&e);
        }
    }
    report
}

/// Scalar functions available to `calc --op fn`.
pub const FUNCTIONS: [&str; 6] = ["identity", "square", "sqrt", "exp", "log", "recip"];

fn scalar_fn(name: &str) -> Option<fn(f64) -> f64> {
    Some(match name {
        "identity" => |x| x,
        "square" => |x| x * x,
        "sqrt" => f64::sqrt,
        "exp" => f64::exp,
        "log" => f64::ln,
        "recip" => f64::recip,
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CalcOp {
    Sqrt,
    Pinv,
    Fn,
}

pub fn calc(input: &Input, op: CalcOp, function: Option<&str>, cx: Context) -> Report {
    let tol = &cx.tol;
    let t = &input.matrix;
    let tag = format!("{op:?}:{}", function.unwrap_or(""));
    let mut report = Report::new(
        "calc",
        digest(&[&input.bytes, tag.as_bytes()]),
        cx.tol,
        cx.seed,
    );
    let scale = scale_of(t);
    let outcome = match op {
        CalcOp::Sqrt => sqrt_l2p(t, tol).map(|r| {
            report.witness("sqrt", &r).residual(
                "square",
                op_norm(&(&r * &r - t)),
                tol.tol_eq * scale,
            );
        }),
        CalcOp::Pinv => mp_inverse_l2p(t, tol).map(|m| {
            let d = &m.dagger;
            let cube = scale.max(op_norm(d)).max(1.0).powi(3);
            let herm = |x: CMatrix| op_norm(&(&x - x.adjoint()));
            report
                .witness("pinv", d)
                .witness("one_two_inverse", &m.one_two_inverse)
                .witness("Q", &m.q)
                .residual("penrose_1", op_norm(&(t * d * t - t)), tol.tol_eq * cube)
                .residual("penrose_2", op_norm(&(d * t * d - d)), tol.tol_eq * cube)
                .residual("penrose_3", herm(t * d), tol.tol_eq * cube)
                .residual("penrose_4", herm(d * t), tol.tol_eq * cube)
                .residual(
                    "svd_oracle",
                    m.oracle_error,
                    tol.tol_eq * op_norm(d).max(1.0),
                );
        }),
        CalcOp::Fn => {
            let name = function.unwrap_or("");
            match scalar_fn(name) {
                None => Err(Error::UnknownName(format!(
                    "function `{name}` (expected one of {})",
                    FUNCTIONS.join(", ")
                ))),
                Some(f) => borel_calculus(t, &f, tol).map(|m| {
                    report.verdict("function", name).witness("f(T)", &m);
                }),
            }
        }
    };
    if let Err(e) = outcome {
        report.fail(&e);
    }
    report
}

pub fn dilate(input: &Input, stage: u8, cx: Context) -> Report {
    let tol = &cx.tol;
    let t = &input.matrix;
    let mut report = Report::new("dilate", digest(&[&input.bytes, &[stage]]), cx.tol, cx.seed);
    let result = match stage {
        1 => dilate_pos_proj(t, tol),
        2 => dilate_proj_proj(t, tol),
        s => Err(Error::InvalidParams(format!(
            "stage must be 1 or 2, got {s}"
        ))),
    };
    match result {
        Ok(d) => {
            report
                .verdict("stage", d.stage)
                .verdict("scale", d.scale)
                .witness("ambient", &d.ambient)
                .witness("left", &d.left)
                .witness("right", &d.right)
                .witness("embed", &d.embed.basis)
                .residual("projection", d.projection_residual, tol.tol_psd)
                .residual("corner", d.corner_residual, tol.tol_eq * scale_of(t));
            if d.stage == DilationStage::ProjProj {
                let (pp, pp_tol) = proj_proj_residual(&d.ambient, tol);
                report.residual("proj_proj_identity", pp, pp_tol);
            }
        }
        Err(e) => {
            report.fail(&e);
        }
    }
    report
}

pub fn gallery_item(
    name: &str,
    params: &GalleryParams,
    param_bytes: &[&[u8]],
    cx: Context,
) -> Report {
    let mut parts = vec![name.as_bytes()];
    parts.extend_from_slice(param_bytes);
    let mut report = Report::new("gallery", digest(&parts), cx.tol, cx.seed);
    let item = name
        .parse::<GalleryName>()
        .and_then(|n| gallery(n, params, &cx.tol));
    match item {
        Ok(item) => {
            report
                .verdict("name", item.name.as_str())
                .witness("T", &item.matrix);
            for (k, m) in &item.factors {
                report.witness(k, m);
            }
            for (k, holds) in &item.certificates {
                report.verdict(k, holds);
            }
            report.verdict("certified", item.certified());
            if !item.certified() {
                report.status = Status::Negative;
            }
        }
        Err(e) => {
            report.fail(&e);
        }
    }
    report
}

/// `geometric:FIRST,RATIO`, `constant:VALUE` or `explicit:V1,V2,...`.
pub fn parse_schedule(s: &str) -> Result<Schedule, String> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("schedule `{s}` must look like kind:values"))?;
    let values: Vec<f64> = rest
        .split(',')
        .filter(|v| !v.trim().is_empty())
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number `{v}`"))
        })
        .collect::<Result<_, _>>()?;
    match (kind, values.as_slice()) {
        ("geometric", &[first, ratio]) => Ok(Schedule::Geometric { first, ratio }),
        ("constant", &[v]) => Ok(Schedule::Constant(v)),
        ("explicit", v) if !v.is_empty() => Ok(Schedule::Explicit(v.to_vec())),
        _ => Err(format!("cannot read schedule `{s}`")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    QsNotSim,
    Sqrtless,
    Compact,
}

#[derive(Debug, Clone)]
pub struct LabArgs {
    pub experiment: Experiment,
    pub dims: Option<Vec<usize>>,
    pub schedule: Option<Schedule>,
    pub lambdas: Vec<f64>,
    pub block_dims: Vec<usize>,
    pub angle: f64,
}

pub fn lab(args: &LabArgs, cx: Context) -> (Report, Option<LabResult>) {
    let canonical = format!("{args:?}");
    let mut report = Report::new("lab", digest(&[canonical.as_bytes()]), cx.tol, cx.seed);
    let result = match args.experiment {
        Experiment::QsNotSim => qs_not_sim_truncation(
            args.dims.as_deref().unwrap_or(&[4, 8, 16, 32, 64]),
            args.schedule
                .as_ref()
                .unwrap_or(&Schedule::default_angles()),
            &cx.tol,
        ),
        Experiment::Sqrtless => sqrtless_truncation(
            args.dims.as_deref().unwrap_or(&[2, 4, 8, 16]),
            args.schedule
                .as_ref()
                .unwrap_or(&Schedule::default_weights()),
            &cx.tol,
        ),
        Experiment::Compact => {
            let lambdas = if args.lambdas.is_empty() {
                vec![1.0, 0.25]
            } else {
                args.lambdas.clone()
            };
            let dims = if args.block_dims.is_empty() {
                vec![1; lambdas.len()]
            } else {
                args.block_dims.clone()
            };
            compact_factor_truncation(&lambdas, &dims, args.angle, &cx.tol)
        }
    };
    match result {
        Ok(r) => {
            report
                .verdict("experiment", &r.name)
                .verdict("dims", &r.dims)
                .verdict("summary", &r.verdicts);
            report.metrics = r.metrics.clone();
            for (k, m) in &r.matrices {
                report.witness(k, m);
            }
            (report, Some(r))
        }
        Err(e) => {
            report.fail(&e);
            (report, None)
        }
    }
}
