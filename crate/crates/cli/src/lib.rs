//! Command-line front end: `eval`, `diagnose` and `verify`.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid input or I/O
//! error, 3 quadrature tolerance not met, 4 impractical truncation depth.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracperiod::diagnostics::{self, DerivativeKind, DiagnosticsReport};
use fracperiod::operators;
use fracperiod::signal::Builtin;
use fracperiod::{Error, FourierSignal, FracOrder, QuadratureConfig, SignalSpec};

mod verify;

pub use verify::{cmd_verify, Suite, VerifyRow, VerifyTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_DEPTH: i32 = 4;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FRACPERIOD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "fracperiod", version, about = "Fractional integrals and derivatives of periodic signals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an operator on a time grid and write `t,value` rows.
    Eval(EvalArgs),
    /// Run the boundedness / periodicity diagnostics and write a report.
    Diagnose(DiagnoseArgs),
    /// Run invariant suites and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SignalArgs {
    /// Signal description file (JSON, or TOML by extension).
    #[arg(long, value_name = "FILE", conflicts_with = "builtin", required_unless_present = "builtin")]
    pub signal: Option<PathBuf>,
    /// Builtin signal: sin, cos, const or square-wave-truncated.
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<Builtin>,
    /// Period of the builtin signal [default: 2π].
    #[arg(long, requires = "builtin")]
    pub period: Option<f64>,
    /// Amplitude of the builtin signal.
    #[arg(long, default_value_t = 1.0, requires = "builtin")]
    pub amplitude: f64,
    /// Constant added to the builtin signal.
    #[arg(long, default_value_t = 0.0, requires = "builtin", allow_hyphen_values = true)]
    pub offset: f64,
    /// Odd harmonics kept by square-wave-truncated.
    #[arg(long, default_value_t = 5, requires = "builtin")]
    pub terms: usize,
}

impl SignalArgs {
    pub fn spec(&self) -> Result<SignalSpec, CliError> {
        let spec = match (&self.signal, self.builtin) {
            (Some(path), _) => SignalSpec::from_path(path)?,
            (None, Some(builtin)) => SignalSpec::Builtin {
                builtin,
                period: self.period.unwrap_or(std::f64::consts::TAU),
                amplitude: self.amplitude,
                offset: self.offset,
                terms: self.terms,
            },
            (None, None) => return Err(CliError::Invalid("one of --signal or --builtin is required".into())),
        };
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Relative tolerance of the singular quadrature.
    #[arg(long, value_name = "X")]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance of the singular quadrature.
    #[arg(long, value_name = "X")]
    pub abs_tol: Option<f64>,
    /// Base panels per period (at least 8).
    #[arg(long, value_name = "N")]
    pub panels: Option<usize>,
}

impl QuadArgs {
    pub fn config(&self) -> Result<QuadratureConfig, CliError> {
        let mut cfg = QuadratureConfig::default();
        if let Some(r) = self.rel_tol {
            cfg.rel_tol = r;
        }
        if let Some(a) = self.abs_tol {
            cfg.abs_tol = a;
        }
        if let Some(p) = self.panels {
            cfg.panels_per_period = p;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `t_min:t_max:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected t_min:t_max:points, got `{s}`"));
        };
        let min: f64 = a.trim().parse().map_err(|e| format!("t_min: {e}"))?;
        let max: f64 = b.trim().parse().map_err(|e| format!("t_max: {e}"))?;
        let points: usize = n.trim().parse().map_err(|e| format!("points: {e}"))?;
        if !(min.is_finite() && max.is_finite() && min >= 0.0 && max > min) {
            return Err(format!("need 0 ≤ t_min < t_max, got {min}:{max}"));
        }
        if points < 2 {
            return Err(format!("need at least 2 points, got {points}"));
        }
        Ok(Self { min, max, points })
    }
}

impl GridSpec {
    pub fn points(&self, log: bool) -> Result<Vec<f64>, CliError> {
        let n = self.points - 1;
        if log {
            if self.min <= 0.0 {
                return Err(CliError::Invalid("--log needs t_min > 0".into()));
            }
            let ratio = (self.max / self.min).ln();
            return Ok((0..=n)
                .map(|i| if i == n { self.max } else { self.min * (ratio * i as f64 / n as f64).exp() })
                .collect());
        }
        let h = (self.max - self.min) / n as f64;
        Ok((0..=n).map(|i| if i == n { self.max } else { self.min + h * i as f64 }).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    RlIntegral,
    Caputo,
    RlDerivative,
    Weyl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeylRoute {
    Fourier,
    Limit,
    Kernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub signal: SignalArgs,
    /// Order α.
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Op::RlIntegral)]
    pub op: Op,
    /// Evaluation route for --op weyl.
    #[arg(long, value_enum, default_value_t = WeylRoute::Fourier)]
    pub weyl_route: WeylRoute,
    /// Target accuracy of the limit route.
    #[arg(long, default_value_t = 1e-10)]
    pub weyl_eps: f64,
    /// Time grid `t_min:t_max:points`.
    #[arg(long = "t", value_name = "SPEC", default_value = "0:10:101")]
    pub grid: GridSpec,
    /// Log-spaced grid (needs t_min > 0).
    #[arg(long)]
    pub log: bool,
    /// Output file [default: standard output].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagnoseOp {
    RlIntegral,
    Caputo,
    RlDerivative,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub signal: SignalArgs,
    /// Order α ∈ (0, 1).
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = DiagnoseOp::RlIntegral)]
    pub op: DiagnoseOp,
    /// Sample grid `t_min:t_max:points` (t_min > 0) [default: 128 points on (0, 40T]].
    #[arg(long = "t", value_name = "SPEC")]
    pub grid: Option<GridSpec>,
    #[arg(long)]
    pub log: bool,
    /// Report file [default: standard output, after the summary line].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Comma-separated suites [default: all]. Names: defect-bound,
    /// route-agreement, semigroup, rl-caputo, scheme-agreement.
    #[arg(long, value_name = "LIST")]
    pub suite: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::ToleranceNotMet { .. }) => EXIT_TOLERANCE,
            CliError::Core(Error::DepthImpractical(_)) => EXIT_DEPTH,
            _ => EXIT_INVALID,
        }
    }
}

/// Worker count: `FRACPERIOD_THREADS` if set, else the available parallelism.
pub fn thread_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(n) if n >= 1 => n,
        _ => available,
    }
}

/// Maps `f` over `ts` on up to `threads` workers; output order follows `ts`.
pub fn par_map<F>(ts: &[f64], threads: usize, f: F) -> Vec<fracperiod::Result<f64>>
where
    F: Fn(f64) -> fracperiod::Result<f64> + Sync,
{
    let threads = threads.clamp(1, ts.len().max(1));
    if threads == 1 {
        return ts.iter().map(|&t| f(t)).collect();
    }
    let chunk = ts.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = ts
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(|&t| f(t)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

pub struct EvalOutput {
    pub rows: Vec<(f64, f64)>,
    pub rendered: String,
}

fn op_name(op: Op) -> &'static str {
    match op {
        Op::RlIntegral => "rl-integral",
        Op::Caputo => "caputo",
        Op::RlDerivative => "rl-derivative",
        Op::Weyl => "weyl",
    }
}

fn evaluate(
    f: &FourierSignal,
    args: &EvalArgs,
    cfg: &QuadratureConfig,
    t: f64,
) -> fracperiod::Result<f64> {
    match args.op {
        Op::RlIntegral => {
            let a = FracOrder::integral(args.alpha)?;
            if t == 0.0 {
                Ok(0.0)
            } else {
                operators::rl_integral(f, a, t, cfg)
            }
        }
        Op::Caputo => {
            let a = FracOrder::derivative(args.alpha)?;
            if t == 0.0 {
                Ok(0.0)
            } else {
                operators::caputo_derivative(f, a, t, cfg)
            }
        }
        Op::RlDerivative => {
            let a = FracOrder::derivative(args.alpha)?;
            if t < operators::RL_DERIVATIVE_MIN_T {
                return Err(Error::SingularAtZero(t));
            }
            operators::rl_derivative(f, a, t, cfg)
        }
        Op::Weyl => {
            let a = FracOrder::weyl(args.alpha)?;
            match args.weyl_route {
                WeylRoute::Fourier => operators::weyl_integral_fourier(f, a, t),
                WeylRoute::Limit => operators::weyl_integral_limit(f, a, t, args.weyl_eps, cfg),
                WeylRoute::Kernel => operators::weyl_integral_kernel(f, a, t),
            }
        }
    }
}

/// Evaluates the selected operator over the grid.
pub fn cmd_eval(args: &EvalArgs) -> Result<EvalOutput, CliError> {
    let spec = args.signal.spec()?;
    let f = spec.to_signal()?;
    let cfg = args.quad.config()?;
    // reject a bad order before any work
    match args.op {
        Op::RlIntegral => FracOrder::integral(args.alpha).map(|_| ())?,
        Op::Caputo | Op::RlDerivative => FracOrder::derivative(args.alpha).map(|_| ())?,
        Op::Weyl => FracOrder::weyl(args.alpha).map(|_| ())?,
    }
    let ts = args.grid.points(args.log)?;
    let values = par_map(&ts, thread_count(), |t| evaluate(&f, args, &cfg, t));
    let mut rows = Vec::with_capacity(ts.len());
    for (&t, v) in ts.iter().zip(values) {
        rows.push((t, v?));
    }
    let rendered = match args.format {
        Format::Csv => {
            let mut s = String::from("t,value\n");
            for (t, v) in &rows {
                let _ = writeln!(s, "{t:.16e},{v:.16e}");
            }
            s
        }
        Format::Json => {
            let value = serde_json::json!({
                "operator": op_name(args.op),
                "alpha": args.alpha,
                "signal": spec,
                "config": cfg,
                "t": rows.iter().map(|r| r.0).collect::<Vec<_>>(),
                "value": rows.iter().map(|r| r.1).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&value).expect("json");
            s.push('\n');
            s
        }
    };
    Ok(EvalOutput { rows, rendered })
}

pub struct DiagnoseOutput {
    pub summary: String,
    pub report: DiagnosticsReport,
    pub rendered: String,
}

/// Runs the diagnostics pipeline and renders the report.
pub fn cmd_diagnose(args: &DiagnoseArgs) -> Result<DiagnoseOutput, CliError> {
    let spec = args.signal.spec()?;
    let f = spec.to_signal()?;
    let cfg = args.quad.config()?;
    let alpha = FracOrder::weyl(args.alpha)?;
    let grid = match args.grid {
        Some(g) => {
            let pts = g.points(args.log)?;
            if pts[0] <= 0.0 {
                return Err(CliError::Invalid("diagnose needs t_min > 0".into()));
            }
            pts
        }
        None => diagnostics::probe_grid(f.period())[1..].to_vec(),
    };
    let mut report = match args.op {
        DiagnoseOp::RlIntegral => diagnostics::diagnose(&f, alpha, Some(&grid), &cfg)?,
        DiagnoseOp::Caputo => diagnostics::derivative_diagnostics(&f, alpha, DerivativeKind::Caputo, &grid, &cfg)?,
        DiagnoseOp::RlDerivative => diagnostics::derivative_diagnostics(&f, alpha, DerivativeKind::Rl, &grid, &cfg)?,
    };
    report.signal = spec;
    let summary = report.summary();
    let rendered = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    Ok(DiagnoseOutput { summary, report, rendered })
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a).and_then(|o| emit(&a.out, &o.rendered, stdout)).map(|_| EXIT_OK),
        Command::Diagnose(a) => cmd_diagnose(a).and_then(|o| {
            writeln!(stdout, "{}", o.summary)?;
            emit(&a.out, &o.rendered, stdout)?;
            Ok(EXIT_OK)
        }),
        Command::Verify(a) => cmd_verify(a).and_then(|table| {
            let text = match a.format {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json() + "\n",
            };
            stdout.write_all(text.as_bytes())?;
            Ok(if table.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
