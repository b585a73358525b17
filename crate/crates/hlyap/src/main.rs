//! Command-line front end for block-diagonal Lyapunov analysis.
//!
//! Subcommands: `analyze` (matrix-class memberships), `construct`
//! (Perron-diagonal or small-gain certificates), `tracemin` (trace
//! minimization over the DD+ relaxation), `pursuit` (column-dropping basis
//! refinement), `smallgain` (two-block Riccati construction), `verify`
//! (independent re-check of a stored certificate), and `bench` (timing
//! tables for the diffusion and cyclic families).
//!
//! Exit codes are part of the contract:
//! * `0` — success / feasible,
//! * `2` — the question posed has a negative answer (LP infeasible, gain
//!   condition violated, certificate does not verify),
//! * `3` — the inputs violate a method's precondition (dimensions,
//!   partition, missing Hurwitz blocks, malformed files),
//! * `1` — internal error (IO, numerical failure).
//!
//! Diagnostics go to stderr; results go to stdout or `--out PATH`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hlyap::bench::{cyclic_system, heat_system, hplus_threshold};
use hlyap::classes::{
    comparison_matrix, is_ddp, is_h_plus, is_h_plus_strict, is_metzler, sdd_scalings,
};
use hlyap::cones::{dual_gramian_lp, tracemin_ddp, tracemin_ddp_scaled};
use hlyap::lp::LpStatus;
use hlyap::matrix::{spectral_abscissa, DenseMatrix, FactorMode, Partition};
use hlyap::pursuit::{basis_pursuit_tracemin, PursuitOptions};
use hlyap::scaling::{diag_lyapunov_blocks, verify_certificate, Certificate, ValidityReport};
use hlyap::smallgain::{blockdiag_smallgain, smallgain_from_scalings, SmallGainReport};
use hlyap::{mmio, Error, Result};

const EXIT_OK: i32 = 0;
const EXIT_INTERNAL: i32 = 1;
const EXIT_INFEASIBLE: i32 = 2;
const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser)]
#[command(
    name = "hlyap",
    version,
    about = "Block-diagonal Lyapunov certificates: scaling constructions, \
             small-gain Riccati solutions, and LP relaxations",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report matrix-class memberships (Metzler, H+, DD+, scalings)
    Analyze(AnalyzeArgs),
    /// Construct a block-diagonal certificate and self-verify it
    Construct(ConstructArgs),
    /// Minimize trace(X) subject to the slack being diagonally dominant
    Tracemin(TraceminArgs),
    /// Refine the DD+ relaxation by dropping unused basis columns
    Pursuit(PursuitArgs),
    /// Two-block small-gain construction via Riccati equations
    Smallgain(SmallgainArgs),
    /// Independently re-check a stored certificate against a matrix
    Verify(VerifyArgs),
    /// Reproduce the benchmark tables (CSV by default)
    Bench(BenchArgs),
}

// ── shared argument groups ───────────────────────────────────────────────

#[derive(Args)]
struct MatrixInput {
    /// System matrix A in Matrix Market format
    #[arg(long, value_name = "PATH")]
    matrix: PathBuf,
    /// Block partition: JSON array of block sizes (e.g. "[2,1]") or a path
    /// to a JSON file; defaults to scalar (all 1x1) blocks
    #[arg(long, value_name = "JSON|PATH")]
    partition: Option<String>,
}

impl MatrixInput {
    fn load(&self) -> Result<(DenseMatrix, Partition)> {
        let a = mmio::load_matrix(&self.matrix)?;
        if a.nrows() != a.ncols() {
            return Err(Error::Dimension(format!(
                "system matrix must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        let alpha = match &self.partition {
            None => Partition::scalar(a.nrows()),
            Some(text) => parse_partition(text),
        }?;
        alpha.require_total(a.nrows())?;
        Ok((a, alpha))
    }
}

#[derive(Args)]
struct OutputOpts {
    /// Write results to PATH instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl OutputOpts {
    fn emit(&self, body: &str) -> Result<()> {
        match &self.out {
            None => print_line(body),
            Some(path) => fs::write(path, format!("{body}\n")).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            }),
        }
    }
}

/// Writes one line to stdout; a closed pipe (e.g. `| head`) ends the
/// process quietly instead of panicking.
fn print_line(body: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{body}") {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => process::exit(EXIT_OK),
        Err(e) => Err(Error::Io {
            path: "<stdout>".into(),
            source: e,
        }),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QKind {
    /// Q = I
    Identity,
    /// Q = B·Bᵀ from the --b vector
    Bbt,
    /// Q = 0 (the LP then fixes the scale with trace(X) = n)
    Zero,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecompArg {
    Cholesky,
    Ldl,
}

impl From<DecompArg> for FactorMode {
    fn from(d: DecompArg) -> Self {
        match d {
            DecompArg::Cholesky => FactorMode::Cholesky,
            DecompArg::Ldl => FactorMode::Ldl,
        }
    }
}

fn parse_partition(text: &str) -> Result<Partition> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let sizes: Vec<usize> = serde_json::from_str(trimmed).map_err(|e| {
            Error::Partition(format!("could not parse partition JSON {trimmed:?}: {e}"))
        })?;
        return Partition::new(sizes);
    }
    mmio::load_partition(trimmed)
}

fn build_q(kind: QKind, b_path: Option<&PathBuf>, n: usize) -> Result<DenseMatrix> {
    match kind {
        QKind::Identity => Ok(DenseMatrix::identity(n)),
        QKind::Zero => Ok(DenseMatrix::zeros(n, n)),
        QKind::Bbt => {
            let path = b_path.ok_or_else(|| {
                Error::Dimension("--q bbt requires --b PATH (Matrix Market vector)".into())
            })?;
            let b = mmio::load_matrix(path)?;
            if b.nrows() != n {
                return Err(Error::Dimension(format!(
                    "B has {} rows but A is {n}x{n}",
                    b.nrows()
                )));
            }
            b.matmul(&b.transpose())
        }
    }
}

// ── analyze ──────────────────────────────────────────────────────────────

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: MatrixInput,
    #[command(flatten)]
    output: OutputOpts,
}

/// Class memberships of `-A`, the stability-relevant object: a Hurwitz
/// diagonally stabilizable system has `-A` in H+.
#[derive(Serialize)]
struct NegationReport {
    metzler: bool,
    h_plus: bool,
    h_plus_strict: bool,
    dd_plus: bool,
    sdd_scalings: Option<Vec<f64>>,
    comparison_matrix: Vec<Vec<f64>>,
    comparison_min_real_eig: f64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: usize,
    partition: Vec<usize>,
    spectral_abscissa: f64,
    hurwitz: bool,
    metzler: bool,
    negation: NegationReport,
}

fn matrix_rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn run_analyze(args: AnalyzeArgs) -> Result<i32> {
    let (a, alpha) = args.input.load()?;
    let neg = a.scaled(-1.0);
    let cm = comparison_matrix(&neg, &alpha)?;
    let scalings = match sdd_scalings(&cm) {
        Ok(s) => Some(s.d),
        Err(Error::Infeasible(_))
        | Err(Error::IrreducibilityFallback(_))
        | Err(Error::Numerical(_)) => None,
        Err(e) => return Err(e),
    };
    let abscissa = spectral_abscissa(&a)?;
    let report = AnalyzeReport {
        n: a.nrows(),
        partition: alpha.sizes().to_vec(),
        spectral_abscissa: abscissa,
        hurwitz: abscissa < 0.0,
        metzler: is_metzler(&a)?,
        negation: NegationReport {
            metzler: is_metzler(&neg)?,
            h_plus: is_h_plus(&neg, &alpha, None)?,
            h_plus_strict: is_h_plus_strict(&neg, &alpha, None)?,
            dd_plus: is_ddp(&neg, 0.0)?,
            sdd_scalings: scalings,
            comparison_matrix: matrix_rows(cm.entries()),
            comparison_min_real_eig: cm.min_real_eig()?,
        },
    };
    args.output.emit(&to_json(&report)?)?;
    Ok(EXIT_OK)
}

// ── construct / tracemin / smallgain envelope ────────────────────────────

/// Common output shape for every subcommand that produces a certificate.
/// `verify` accepts this envelope as well as a bare certificate.
#[derive(Serialize)]
struct CertificateEnvelope<'a> {
    method: &'a str,
    certificate: &'a Certificate,
    verification: &'a ValidityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scaled: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    smallgain: Option<&'a SmallGainReport>,
}

/// Re-checks a freshly constructed certificate through the same routine the
/// `verify` subcommand uses, so everything the CLI writes is already known
/// to pass an independent verification.
fn self_verify(a: &DenseMatrix, cert: &Certificate, alpha: &Partition) -> Result<ValidityReport> {
    let report = verify_certificate(a, cert, alpha)?;
    if !report.valid {
        return Err(Error::Numerical(format!(
            "constructed certificate failed self-verification: min eig X = {:.6e}, \
             max eig slack = {:.6e}",
            report.min_eig_x, report.max_eig_slack
        )));
    }
    Ok(report)
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructMethod {
    /// Diagonal X from Perron scalings of the comparison matrix
    Diagonal,
    /// Block-diagonal X from the scalings-driven small-gain split
    Smallgain,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// Construction path
    #[arg(long, value_enum, default_value_t = ConstructMethod::Diagonal)]
    method: ConstructMethod,
    #[command(flatten)]
    output: OutputOpts,
}

fn run_construct(args: ConstructArgs) -> Result<i32> {
    let (a, alpha) = args.input.load()?;
    let body = match args.method {
        ConstructMethod::Diagonal => {
            let cert = diag_lyapunov_blocks(&a, &alpha)?;
            let verification = self_verify(&a, &cert, &alpha)?;
            to_json(&CertificateEnvelope {
                method: "diagonal",
                certificate: &cert,
                verification: &verification,
                objective: None,
                eta: None,
                scaled: None,
                smallgain: None,
            })?
        }
        ConstructMethod::Smallgain => {
            let report = smallgain_from_scalings(&a, &alpha)?;
            let verification = self_verify(&a, &report.certificate, &alpha)?;
            to_json(&CertificateEnvelope {
                method: "smallgain",
                certificate: &report.certificate,
                verification: &verification,
                objective: None,
                eta: None,
                scaled: None,
                smallgain: Some(&report),
            })?
        }
    };
    args.output.emit(&body)?;
    Ok(EXIT_OK)
}

// ── tracemin ─────────────────────────────────────────────────────────────

#[derive(Args)]
struct TraceminArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// Offset matrix Q in the slack -(AX + XAᵀ + Q)
    #[arg(long, value_enum, default_value_t = QKind::Identity)]
    q: QKind,
    /// Input vector B (Matrix Market) for --q bbt
    #[arg(long, value_name = "PATH")]
    b: Option<PathBuf>,
    /// Diagonal-dominance margin applied to the slack
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Solve in Perron-rescaled coordinates (map the result back)
    #[arg(long)]
    scaled: bool,
    #[command(flatten)]
    output: OutputOpts,
}

fn run_tracemin(args: TraceminArgs) -> Result<i32> {
    let (a, alpha) = args.input.load()?;
    let q = build_q(args.q, args.b.as_ref(), a.nrows())?;
    let (cert, objective) = if args.scaled {
        tracemin_ddp_scaled(&a, &alpha, &q, args.eta)?
    } else {
        tracemin_ddp(&a, &alpha, &q, args.eta)?
    };
    let verification = self_verify(&a, &cert, &alpha)?;
    let body = to_json(&CertificateEnvelope {
        method: if args.scaled {
            "tracemin_dd_scaled"
        } else {
            "tracemin_dd"
        },
        certificate: &cert,
        verification: &verification,
        objective: Some(objective),
        eta: Some(args.eta),
        scaled: Some(args.scaled),
        smallgain: None,
    })?;
    args.output.emit(&body)?;
    Ok(EXIT_OK)
}

// ── pursuit ──────────────────────────────────────────────────────────────

#[derive(Args)]
struct PursuitArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// Offset matrix Q in the slack -(AX + XAᵀ + Q)
    #[arg(long, value_enum, default_value_t = QKind::Identity)]
    q: QKind,
    /// Input vector B (Matrix Market) for --q bbt
    #[arg(long, value_name = "PATH")]
    b: Option<PathBuf>,
    /// Diagonal-dominance margin for the initial cone
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Column-activity threshold for dropping basis columns
    #[arg(long, default_value_t = 1e-8)]
    tau: f64,
    /// Stop after this many refinement sweeps
    #[arg(long, default_value_t = 20)]
    max_iters: usize,
    /// Factorization used to extract basis directions from the slack
    #[arg(long, value_enum, default_value_t = DecompArg::Cholesky)]
    decomp: DecompArg,
    #[command(flatten)]
    output: OutputOpts,
}

fn run_pursuit(args: PursuitArgs) -> Result<i32> {
    let (a, alpha) = args.input.load()?;
    let q = build_q(args.q, args.b.as_ref(), a.nrows())?;
    let opts = PursuitOptions {
        eta: args.eta,
        tau: args.tau,
        max_iters: args.max_iters,
        decomp: args.decomp.into(),
        ..PursuitOptions::default()
    };
    let trace = basis_pursuit_tracemin(&a, &alpha, &q, &opts)?;
    // Progress stream: one JSON object per refinement sweep on stdout.
    #[derive(Serialize)]
    struct SweepLine {
        k: usize,
        objective: f64,
        dropped: usize,
    }
    for it in &trace.iterations {
        let line = SweepLine {
            k: it.k,
            objective: it.objective,
            dropped: it.dropped_columns,
        };
        print_line(
            &serde_json::to_string(&line)
                .map_err(|e| Error::Numerical(format!("JSON serialization failed: {e}")))?,
        )?;
    }
    // The full trace (including the final certificate) goes to --out.
    if args.output.out.is_some() {
        args.output.emit(&to_json(&trace)?)?;
    }
    Ok(EXIT_OK)
}

// ── smallgain ────────────────────────────────────────────────────────────

#[derive(Args)]
struct SmallgainArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// Gain split between the blocks; derived from the Riccati data if absent
    #[arg(long, conflicts_with = "from_scalings")]
    gamma: Option<f64>,
    /// Derive the split from SDD scalings of the comparison matrix instead
    #[arg(long)]
    from_scalings: bool,
    #[command(flatten)]
    output: OutputOpts,
}

fn run_smallgain(args: SmallgainArgs) -> Result<i32> {
    let (a, alpha) = args.input.load()?;
    let report = if args.from_scalings {
        smallgain_from_scalings(&a, &alpha)?
    } else {
        blockdiag_smallgain(&a, &alpha, args.gamma)?
    };
    let verification = self_verify(&a, &report.certificate, &alpha)?;
    let body = to_json(&CertificateEnvelope {
        method: if args.from_scalings {
            "smallgain_scalings"
        } else {
            "smallgain"
        },
        certificate: &report.certificate,
        verification: &verification,
        objective: None,
        eta: None,
        scaled: None,
        smallgain: Some(&report),
    })?;
    args.output.emit(&body)?;
    Ok(EXIT_OK)
}

// ── verify ───────────────────────────────────────────────────────────────

#[derive(Args)]
struct VerifyArgs {
    /// System matrix A in Matrix Market format
    #[arg(long, value_name = "PATH")]
    matrix: PathBuf,
    /// Certificate JSON: either a bare certificate or any CLI output
    /// containing a "certificate" field
    #[arg(long, value_name = "PATH")]
    certificate: PathBuf,
    #[command(flatten)]
    output: OutputOpts,
}

fn run_verify(args: VerifyArgs) -> Result<i32> {
    let a = mmio::load_matrix(&args.matrix)?;
    let text = fs::read_to_string(&args.certificate).map_err(|e| Error::Io {
        path: args.certificate.display().to_string(),
        source: e,
    })?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: args.certificate.display().to_string(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    let cert_value = value.get("certificate").cloned().unwrap_or(value);
    let cert: Certificate = serde_json::from_value(cert_value).map_err(|e| Error::Parse {
        path: args.certificate.display().to_string(),
        line: 0,
        msg: format!("not a certificate: {e}"),
    })?;
    let alpha = cert.partition.clone();
    let report = verify_certificate(&a, &cert, &alpha)?;
    args.output.emit(&to_json(&report)?)?;
    if report.valid {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "certificate rejected: min eig X = {:.6e}, max eig slack = {:.6e}",
            report.min_eig_x, report.max_eig_slack
        );
        Ok(EXIT_INFEASIBLE)
    }
}

// ── bench ────────────────────────────────────────────────────────────────

#[derive(Args)]
struct BenchArgs {
    #[command(subcommand)]
    family: BenchFamily,
}

#[derive(Subcommand)]
enum BenchFamily {
    /// Discretized diffusion chain: dual Gramian LP objective vs n
    Heat(HeatBenchArgs),
    /// Cyclic interconnection: loop-gain ratio against the secant bound
    Cyclic(CyclicBenchArgs),
}

#[derive(Args)]
struct HeatBenchArgs {
    /// Chain sizes; repeat the flag or separate with commas
    #[arg(long = "n", value_name = "N", value_delimiter = ',',
          default_values_t = [50usize, 100, 150, 200])]
    n: Vec<usize>,
    /// Solve the Perron-rescaled variant of the LP
    #[arg(long)]
    scaled: bool,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct CyclicBenchArgs {
    /// Decay rates a_i of the stages (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    alphas: Vec<f64>,
    /// Coupling gains b_i between consecutive stages (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    betas: Vec<f64>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    method: String,
    objective: f64,
    wall_time_ms: f64,
}

fn render_rows(rows: &[BenchRow], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut s = String::from("n,method,objective,wall_time_ms");
            for r in rows {
                s.push_str(&format!(
                    "\n{},{},{},{:.3}",
                    r.n, r.method, r.objective, r.wall_time_ms
                ));
            }
            Ok(s)
        }
        Format::Json => to_json(&rows),
    }
}

fn run_bench_heat(args: HeatBenchArgs) -> Result<i32> {
    let mut rows = Vec::new();
    for &n in &args.n {
        let sys = heat_system(n)?;
        let start = Instant::now();
        let report = dual_gramian_lp(&sys.a, &sys.b, args.scaled)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let objective = match report.status {
            LpStatus::Optimal => report.objective.ok_or_else(|| {
                Error::Numerical("optimal LP returned no objective".into())
            })?,
            LpStatus::Infeasible => {
                return Err(Error::Infeasible(format!(
                    "dual Gramian LP infeasible at n = {n}"
                )))
            }
            LpStatus::Unbounded => {
                return Err(Error::Numerical(format!(
                    "dual Gramian LP unbounded at n = {n}"
                )))
            }
        };
        eprintln!(
            "heat n = {n}: objective {objective:.6} in {elapsed:.1} ms{}",
            if args.scaled { " (scaled)" } else { "" }
        );
        rows.push(BenchRow {
            n,
            method: if args.scaled {
                "dual_gramian_lp_scaled".into()
            } else {
                "dual_gramian_lp".into()
            },
            objective,
            wall_time_ms: elapsed,
        });
    }
    args.output.emit(&render_rows(&rows, args.format)?)?;
    Ok(EXIT_OK)
}

fn run_bench_cyclic(args: CyclicBenchArgs) -> Result<i32> {
    let start = Instant::now();
    let sys = cyclic_system(&args.alphas, &args.betas)?;
    let threshold = hplus_threshold(&sys)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let n = args.alphas.len();
    let rows = vec![
        BenchRow {
            n,
            method: "cyclic_ratio".into(),
            objective: threshold.ratio,
            wall_time_ms: elapsed,
        },
        BenchRow {
            n,
            method: "h_plus".into(),
            objective: if threshold.is_hplus { 1.0 } else { 0.0 },
            wall_time_ms: 0.0,
        },
        BenchRow {
            n,
            method: "secant_bound".into(),
            objective: threshold.diag_stability_bound,
            wall_time_ms: 0.0,
        },
    ];
    args.output.emit(&render_rows(&rows, args.format)?)?;
    Ok(EXIT_OK)
}

// ── plumbing ─────────────────────────────────────────────────────────────

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::Numerical(format!("JSON serialization failed: {e}")))
}

/// Maps library errors onto the CLI exit-code contract.
fn exit_code_for(err: &Error) -> i32 {
    match err {
        // The mathematical question has a negative answer.
        Error::Infeasible(_)
        | Error::NoInitialPoint(_)
        | Error::SmallGainViolated { .. }
        | Error::ImaginaryAxisEigenvalues { .. } => EXIT_INFEASIBLE,
        // The inputs violate a method's contract.
        Error::Dimension(_)
        | Error::NotSymmetric(_)
        | Error::Partition(_)
        | Error::Parse { .. }
        | Error::NotHPlus(_)
        | Error::NotHurwitz(_)
        | Error::NotHurwitzBlock { .. }
        | Error::NotPositiveDefinite { .. }
        | Error::RankDeficientBasis(_) => EXIT_PRECONDITION,
        // Internal failures.
        Error::Io { .. } | Error::IrreducibilityFallback(_) | Error::Numerical(_) => {
            EXIT_INTERNAL
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Construct(args) => run_construct(args),
        Command::Tracemin(args) => run_tracemin(args),
        Command::Pursuit(args) => run_pursuit(args),
        Command::Smallgain(args) => run_smallgain(args),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => match args.family {
            BenchFamily::Heat(h) => run_bench_heat(h),
            BenchFamily::Cyclic(c) => run_bench_cyclic(c),
        },
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            process::exit(exit_code_for(&err));
        }
    }
}
