mod commands;
mod matrix_io;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{read_input, CalcOp, Context, Experiment, Input, InputError, LabArgs};
use posfact_core::lab::GalleryParams;
use posfact_core::Tolerances;
use rayon::prelude::*;
use report::{Report, Status};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Decide and certify membership in the class of products of two positive
/// semidefinite matrices.
#[derive(Debug, Parser)]
#[command(name = "posfact", version)]
struct Cli {
    #[arg(long, global = true, env = "POSFACT_TOL_RANK", default_value_t = 1e-10)]
    tol_rank: f64,
    #[arg(long, global = true, env = "POSFACT_TOL_PSD", default_value_t = 1e-10)]
    tol_psd: f64,
    #[arg(long, global = true, env = "POSFACT_TOL_EQ", default_value_t = 1e-8)]
    tol_eq: f64,
    #[arg(
        long,
        global = true,
        env = "POSFACT_TOL_CLUSTER",
        default_value_t = 1e-8
    )]
    tol_cluster: f64,
    #[arg(long, global = true, env = "POSFACT_COND_MAX", default_value_t = 1e8)]
    cond_max: f64,
    #[arg(long, global = true, env = "POSFACT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "POSFACT_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run the command on every file of a directory, in filename order.
    #[arg(long, global = true)]
    batch: Option<PathBuf>,
    /// Also save every witness matrix as `<name>.txt` in this directory.
    #[arg(long, global = true)]
    witness_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum report, membership verdict and subclass.
    Analyze {
        file: Option<PathBuf>,
        /// Sample the resolvent growth on this many points (0 skips it).
        #[arg(long, default_value_t = 0)]
        resolvent_samples: usize,
    },
    /// Optimal pair, or a pair with invertible B.
    Factor {
        file: Option<PathBuf>,
        #[arg(long)]
        invertible_b: bool,
    },
    /// Positive solution X of A·X = T.
    Solve { a: PathBuf, t: PathBuf },
    /// Schur complement and compression to a subspace.
    Schur {
        file: Option<PathBuf>,
        /// Matrix whose columns span the subspace.
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Functional calculus: square root, Moore-Penrose inverse or f(T).
    Calc {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        op: CalcOp,
        /// Function for `--op fn`: identity, square, sqrt, exp, log, recip.
        #[arg(long = "fn")]
        function: Option<String>,
    },
    /// Dilation to a positive-times-projection (1) or projection-times-projection (2) product.
    Dilate {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        stage: u8,
    },
    /// Named example: oblique_projection, three_positive_nilpotent, nonunique_minimal.
    Gallery {
        name: String,
        /// Range basis for oblique_projection.
        #[arg(long)]
        range: Option<PathBuf>,
        /// Kernel basis for oblique_projection.
        #[arg(long)]
        kernel: Option<PathBuf>,
        /// Ratio for nonunique_minimal.
        #[arg(long)]
        ratio: Option<f64>,
    },
    /// Truncated experiments with divergence metrics.
    Lab {
        #[arg(value_enum)]
        experiment: Experiment,
        /// Dimensions to sweep, comma separated.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// geometric:FIRST,RATIO | constant:V | explicit:V1,V2,...
        #[arg(long, value_parser = commands::parse_schedule)]
        schedule: Option<posfact_core::lab::Schedule>,
        /// Eigenvalues for the compact experiment.
        #[arg(long, value_delimiter = ',')]
        lambdas: Vec<f64>,
        /// Block dimensions for the compact experiment.
        #[arg(long, value_delimiter = ',')]
        block_dims: Vec<usize>,
        /// Tilt of later blocks towards the first (compact experiment).
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
        /// Also write the metric table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn input_failure(command: &str, cx: Context, err: InputError) -> Report {
    let mut r = Report::new(command, String::new(), cx.tol, cx.seed);
    r.status = Status::InputError;
    r.error = Some(err.0);
    r
}

fn with_input(command: &str, path: &Path, cx: Context, f: impl Fn(&Input) -> Report) -> Report {
    match read_input(path) {
        Ok(input) => f(&input),
        Err(e) => input_failure(command, cx, e),
    }
}

fn batch_files(dir: &Path) -> Result<Vec<PathBuf>, InputError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| InputError(format!("cannot read directory {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

/// One report per input file: the positional file, or every file of the
/// batch directory.
fn per_file(
    command: &str,
    file: Option<&Path>,
    batch: Option<&Path>,
    cx: Context,
    f: impl Fn(&Input) -> Report + Sync,
) -> Vec<Report> {
    match (file, batch) {
        (Some(p), None) => vec![with_input(command, p, cx, &f)],
        (None, Some(dir)) => match batch_files(dir) {
            Ok(files) => files
                .par_iter()
                .map(|p| {
                    let mut r = with_input(command, p, cx, &f);
                    r.verdict("file", p.display().to_string());
                    r
                })
                .collect(),
            Err(e) => vec![input_failure(command, cx, e)],
        },
        _ => vec![input_failure(
            command,
            cx,
            InputError("give exactly one of an input file or --batch".into()),
        )],
    }
}

fn run(cli: &Cli) -> Vec<Report> {
    let tol = Tolerances {
        tol_rank: cli.tol_rank,
        tol_psd: cli.tol_psd,
        tol_eq: cli.tol_eq,
        tol_cluster: cli.tol_cluster,
        cond_max: cli.cond_max,
    };
    let cx = Context {
        tol,
        seed: cli.seed,
    };
    if !tol.is_valid() {
        return vec![input_failure(
            "posfact",
            cx,
            InputError("tolerances must be finite and positive".into()),
        )];
    }
    let batch = cli.batch.as_deref();
    let single_only = |name: &str| {
        input_failure(
            name,
            cx,
            InputError(format!("{name} does not support --batch")),
        )
    };
    match &cli.command {
        Command::Analyze {
            file,
            resolvent_samples,
        } => per_file("analyze", file.as_deref(), batch, cx, |i| {
            commands::analyze(i, *resolvent_samples, cx)
        }),
        Command::Factor { file, invertible_b } => {
            per_file("factor", file.as_deref(), batch, cx, |i| {
                commands::factor(i, *invertible_b, cx)
            })
        }
        Command::Solve { a, t } => {
            if batch.is_some() {
                return vec![single_only("solve")];
            }
            let inputs = read_input(a).and_then(|a| read_input(t).map(|t| (a, t)));
            vec![match inputs {
                Ok((a, t)) => commands::solve(&a, &t, cx),
                Err(e) => input_failure("solve", cx, e),
            }]
        }
        Command::Schur { file, subspace } => match read_input(subspace) {
            Ok(s) => per_file("schur", file.as_deref(), batch, cx, |i| {
                commands::schur(i, &s, cx)
            }),
            Err(e) => vec![input_failure("schur", cx, e)],
        },
        Command::Calc { file, op, function } => per_file("calc", file.as_deref(), batch, cx, |i| {
            commands::calc(i, *op, function.as_deref(), cx)
        }),
        Command::Dilate { file, stage } => per_file("dilate", file.as_deref(), batch, cx, |i| {
            commands::dilate(i, *stage, cx)
        }),
        Command::Gallery {
            name,
            range,
            kernel,
            ratio,
        } => {
            if batch.is_some() {
                return vec![single_only("gallery")];
            }
            let load = |p: &Option<PathBuf>| p.as_deref().map(read_input).transpose();
            let (range, kernel) = match (load(range), load(kernel)) {
                (Ok(r), Ok(k)) => (r, k),
                (Err(e), _) | (_, Err(e)) => return vec![input_failure("gallery", cx, e)],
            };
            let params = GalleryParams {
                range: range.as_ref().map(|i| i.matrix.clone()),
                kernel: kernel.as_ref().map(|i| i.matrix.clone()),
                ratio: *ratio,
            };
            let ratio_bytes = ratio.map(f64::to_le_bytes).unwrap_or_default();
            let empty: &[u8] = &[];
            let bytes = [
                range.as_ref().map_or(empty, |i| &i.bytes[..]),
                kernel.as_ref().map_or(empty, |i| &i.bytes[..]),
                &ratio_bytes[..],
            ];
            vec![commands::gallery_item(name, &params, &bytes, cx)]
        }
        Command::Lab {
            experiment,
            dims,
            schedule,
            lambdas,
            block_dims,
            angle,
            csv,
        } => {
            if batch.is_some() {
                return vec![single_only("lab")];
            }
            let args = LabArgs {
                experiment: *experiment,
                dims: dims.clone(),
                schedule: schedule.clone(),
                lambdas: lambdas.clone(),
                block_dims: block_dims.clone(),
                angle: *angle,
            };
            let (mut report, result) = commands::lab(&args, cx);
            if let (Some(path), Some(result)) = (csv, result) {
                if let Err(e) = std::fs::write(path, result.to_csv()) {
                    report.status = Status::InputError;
                    report.error = Some(format!("cannot write {}: {e}", path.display()));
                }
            }
            vec![report]
        }
    }
}

fn render(reports: &[Report], format: Format, batch: bool) -> String {
    let json =
        |r: serde_json::Result<String>| r.map(|s| s + "\n").unwrap_or_else(|_| "{}\n".into());
    match format {
        Format::Text => reports
            .iter()
            .map(Report::text)
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json if batch => json(serde_json::to_string_pretty(reports)),
        Format::Json => json(serde_json::to_string_pretty(&reports[0])),
    }
}

/// File name for a witness: alphanumerics kept, everything else `_`.
fn witness_file(prefix: Option<&str>, name: &str) -> String {
    let clean: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    match prefix {
        Some(p) => format!("{p}.{clean}.txt"),
        None => format!("{clean}.txt"),
    }
}

fn save_witnesses(dir: &Path, reports: &[Report], batch: bool) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for r in reports {
        let prefix = batch.then(|| {
            r.verdicts
                .get("file")
                .and_then(|v| v.as_str())
                .and_then(|f| Path::new(f).file_stem())
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default()
        });
        for (name, m) in r.matrices() {
            let comment = format!("{} witness {name}", r.command);
            std::fs::write(
                dir.join(witness_file(prefix.as_deref(), name)),
                matrix_io::write_matrix(m, Some(&comment)),
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let start = Instant::now();
    let mut reports = run(&cli);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    for r in &mut reports {
        r.runtime_ms = elapsed;
    }
    if let Some(dir) = &cli.witness_dir {
        if let Err(e) = save_witnesses(dir, &reports, cli.batch.is_some()) {
            eprintln!("posfact: cannot write witnesses to {}: {e}", dir.display());
            return ExitCode::from(4);
        }
    }
    let text = render(&reports, cli.format, cli.batch.is_some());
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("posfact: cannot write report: {e}");
        return ExitCode::from(4);
    }
    for r in reports.iter().filter(|r| r.error.is_some()) {
        eprintln!("posfact: {}", r.error.as_deref().unwrap_or_default());
    }
    let code = reports
        .iter()
        .map(|r| r.status)
        .max()
        .unwrap_or(Status::Ok)
        .code();
    ExitCode::from(code as u8)
}
