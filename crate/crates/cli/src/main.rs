//! `pend-nf`: verification suites, exact coefficient tables, trajectories
//! and canonical-map queries for the pendulum normal form.

mod coeffs;
mod error;
mod map;
mod number;
mod output;
mod traj;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use pend_nf_core::dynamics::{Method, PendulumParams};

use crate::coeffs::{Normalization, SeriesName};
use crate::error::CliError;
use crate::number::Exact;

const MAX_ORDER_VAR: &str = "PEND_NF_MAX_ORDER";

#[derive(Parser)]
#[command(name = "pend-nf", version, about = "Hyperbolic normal form of the pendulum: checks, tables, trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Emit exact series coefficients.
    Coeffs(CoeffsArgs),
    /// Sample a rotation above the separatrix.
    Trajectory(TrajectoryArgs),
    /// Evaluate the canonical map or its inverse at one point.
    Map(MapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct ParamArgs {
    /// Moment of inertia I (default 1/32).
    #[arg(long = "I", value_name = "I")]
    inertia: Option<Exact>,
    /// Rate g = √(mgl/I) (default 1).
    #[arg(long, value_name = "G")]
    g: Option<Exact>,
}

impl ParamArgs {
    fn params(&self) -> Result<PendulumParams, CliError> {
        let i = self.inertia.as_ref().map_or(1.0 / 32.0, |v| v.value);
        let g = self.g.as_ref().map_or(1.0, |v| v.value);
        PendulumParams::new(i, g).map_err(|e| CliError::usage(e.to_string()))
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: verify::Suite,
    /// Series order for the exact checks.
    #[arg(long)]
    order: Option<usize>,
    /// Tolerance applied to every measured check.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long, value_enum)]
    series: SeriesName,
    /// Highest power emitted.
    #[arg(long)]
    order: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Rescale to physical units; needs --I and --g.
    #[arg(long, requires_all = ["inertia", "g"])]
    physical: bool,
    #[arg(long = "I", value_name = "I", requires = "physical")]
    inertia: Option<Exact>,
    #[arg(long, value_name = "G", requires = "physical")]
    g: Option<Exact>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("orbit").required(true).args(["h", "energy"])))]
struct TrajectoryArgs {
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Modulus h in (0, 1).
    #[arg(long)]
    h: Option<f64>,
    /// Energy above the separatrix.
    #[arg(long)]
    energy: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
    #[arg(long)]
    t1: f64,
    #[arg(long)]
    dt: f64,
    /// Local tolerance of the rk method.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("point").required(true).args(["p", "b"])))]
struct MapArgs {
    /// Normal coordinate p (forward map).
    #[arg(long, requires = "q", allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, requires = "p", allow_hyphen_values = true)]
    q: Option<f64>,
    /// Momentum B (inverse map).
    #[arg(long = "B", value_name = "B", requires = "beta", allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, requires = "b", allow_hyphen_values = true)]
    beta: Option<f64>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|_| format!("unknown method {s:?}; expected closed, series, normal or rk"))
}

fn format_or(f: Option<Format>, default: Format, allowed: &[Format], command: &str) -> Result<Format, CliError> {
    let f = f.unwrap_or(default);
    if !allowed.contains(&f) {
        return Err(CliError::usage(format!("format {f:?} is not available for {command}").to_lowercase()));
    }
    Ok(f)
}

fn order_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(MAX_ORDER_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::usage(format!("{MAX_ORDER_VAR}={v:?} is not a positive integer"))),
        },
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::usage(format!("{MAX_ORDER_VAR}: {e}"))),
    }
}

fn check_order(order: usize) -> Result<(), CliError> {
    if order == 0 {
        return Err(CliError::usage("--order must be at least 1"));
    }
    Ok(())
}

fn run_verify(a: VerifyArgs) -> Result<(), CliError> {
    let format = format_or(a.format, Format::Text, &[Format::Text, Format::Json], "verify")?;
    if let Some(o) = a.order {
        check_order(o)?;
    }
    if let Some(t) = a.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::usage(format!("--tol {t} must be positive")));
        }
    }
    let settings = verify::Settings { order: a.order, tol: a.tol, cap: order_cap()?, params: a.params.params()? };
    let checks = verify::run(a.suite, &settings);
    let text = match format {
        Format::Json => verify::render_json(&checks),
        _ => verify::render_text(&checks),
    };
    output::emit(a.output.as_deref(), &text)?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed, checks.len()));
    }
    Ok(())
}

fn run_coeffs(a: CoeffsArgs) -> Result<(), CliError> {
    let format = format_or(a.format, Format::Text, &[Format::Text, Format::Json, Format::Csv], "coeffs")?;
    check_order(a.order)?;
    let order = order_cap()?.map_or(a.order, |c| a.order.min(c));
    let norm = match (a.physical, a.inertia, a.g) {
        (true, Some(inertia), Some(g)) => Normalization::Physical { inertia, g },
        (true, ..) => return Err(CliError::usage("--physical needs --I and --g")),
        _ => Normalization::Normalized,
    };
    let series = norm.apply(a.series, &a.series.build(order));
    let text = match format {
        Format::Json => coeffs::render_json(a.series, &series, &norm),
        Format::Csv => coeffs::render_csv(a.series, &series, &norm),
        Format::Text => coeffs::render_text(a.series, &series, &norm),
    };
    output::emit(a.output.as_deref(), &text)
}

fn run_trajectory(a: TrajectoryArgs) -> Result<(), CliError> {
    let format = format_or(a.format, Format::Csv, &[Format::Csv, Format::Json], "trajectory")?;
    let par = a.params.params()?;
    let orbit = match (a.h, a.energy) {
        (Some(h), None) => traj::Orbit::Modulus(h),
        (None, Some(e)) => traj::Orbit::Energy(e),
        _ => return Err(CliError::usage("give exactly one of --h and --energy")),
    };
    let times = traj::sample_times(a.t0, a.t1, a.dt)?;
    let rows = traj::compute(a.method, orbit, &par, &times, a.tol)?;
    let text = match format {
        Format::Json => traj::render_json(&rows),
        _ => traj::render_csv(&rows),
    };
    output::emit(a.output.as_deref(), &text)
}

fn run_map(a: MapArgs) -> Result<(), CliError> {
    let format = format_or(a.format, Format::Text, &[Format::Text, Format::Json], "map")?;
    let par = a.params.params()?;
    let query = match (a.p, a.q, a.b, a.beta) {
        (Some(p), Some(q), None, None) => map::Query::Forward { p, q },
        (None, None, Some(b), Some(beta)) => map::Query::Inverse { b, beta },
        _ => return Err(CliError::usage("give either --p and --q, or --B and --beta")),
    };
    let r = map::evaluate(query, &par)?;
    let text = match format {
        Format::Json => map::render_json(&r),
        _ => map::render_text(&r),
    };
    output::emit(a.output.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Coeffs(a) => run_coeffs(a),
        Command::Trajectory(a) => run_trajectory(a),
        Command::Map(a) => run_map(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
