//! `qr3`: verification, Julia spheres, slices, growth design and orbits.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check, 2 on a
//! usage, configuration or I/O error.

mod config;
mod growth;
mod julia;
mod orbit;
mod render;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{parse_range, GrowthMode, LambdaSpec, Plane, RunConfig, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Core(#[from] qr3_core::Error),
}

#[derive(Parser)]
#[command(name = "qr3", version, about = "Quasiregular maps in R^3 with spherical Julia components")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a JSON report.
    Verify(VerifyArgs),
    /// Tabulate the Julia spheres as CSV.
    JuliaSpheres(JuliaArgs),
    /// Render an escape-time slice as a P6 image.
    RenderSlice(RenderArgs),
    /// Design and certify a lambda sequence with prescribed growth.
    GrowthDesign(GrowthArgs),
    /// Print an orbit of the global map as JSON.
    Orbit(OrbitArgs),
}

#[derive(Args)]
struct Common {
    /// JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output if absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "R1", alias = "r1")]
    r1: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Suites to run; repeatable.
    #[arg(long, value_enum)]
    suite: Vec<Suite>,
    #[arg(long)]
    d: Option<u64>,
    /// Levels, `a..b` or a single level.
    #[arg(long, value_parser = parse_range)]
    k: Option<(usize, usize)>,
    #[arg(long)]
    samples: Option<usize>,
    /// `random` or comma-separated `log lambda_j`.
    #[arg(long)]
    lambda: Option<LambdaSpec>,
    /// Length of a random lambda sequence.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct JuliaArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = parse_range)]
    k: Option<(usize, usize)>,
    #[arg(long)]
    n_pullback: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    plane: Option<Plane>,
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta_max: Option<f64>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    threshold_level: Option<usize>,
    #[arg(long)]
    no_overlays: bool,
}

#[derive(Args)]
struct GrowthArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    mode: Option<GrowthMode>,
    #[arg(long, allow_negative_numbers = true)]
    log_r: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    log_t: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    eta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    level: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    offset: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    y1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    y2: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn resolve(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = config::load(common.config.as_deref())?;
    set(&mut cfg.seed, common.seed);
    set(&mut cfg.r1, common.r1);
    set(&mut cfg.n_max, common.n_max);
    Ok(cfg)
}

#[derive(Serialize)]
struct Envelope<'a, B: Serialize> {
    command: &'static str,
    config: &'a RunConfig,
    passed: bool,
    #[serde(flatten)]
    body: B,
}

#[derive(Serialize)]
struct Suites {
    suites: Vec<qr3_core::report::VerificationReport>,
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(p.display().to_string(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::Io("stdout".into(), e))
        }
    }
}

fn emit_json<B: Serialize>(common: &Common, command: &'static str, cfg: &RunConfig, passed: bool, body: B) -> Result<bool, CliError> {
    let env = Envelope { command, config: cfg, passed, body };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| CliError::Config(e.to_string()))?;
    s.push('\n');
    emit(common.output.as_deref(), s.as_bytes())?;
    Ok(passed)
}

fn config_json(cfg: &RunConfig) -> Result<String, CliError> {
    serde_json::to_string(cfg).map_err(|e| CliError::Config(e.to_string()))
}

/// `Ok(true)` when every check passed.
fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify(a) => {
            let mut cfg = resolve(&a.common)?;
            let v = &mut cfg.verify;
            if !a.suite.is_empty() {
                v.suites = a.suite.clone();
            }
            set(&mut v.d, a.d);
            if let Some((lo, hi)) = a.k {
                v.k_min = lo;
                v.k_max = hi;
            }
            set(&mut v.samples, a.samples);
            set(&mut v.lambda, a.lambda.clone());
            set(&mut v.lambda_n, a.n);
            set(&mut v.grid_n, a.grid_n);
            set(&mut v.tolerance, a.tolerance);
            cfg.validate("verify")?;
            let suites = verify::run(&cfg)?;
            let passed = suites.iter().all(|s| s.passed());
            for c in suites.iter().flat_map(|s| s.failures()) {
                eprintln!("FAIL {}: measured {:e}, tolerance {:e}", c.name, c.measured, c.tolerance);
            }
            emit_json(&a.common, "verify", &cfg, passed, Suites { suites })
        }
        Command::JuliaSpheres(a) => {
            let mut cfg = resolve(&a.common)?;
            let j = &mut cfg.julia;
            if let Some((lo, hi)) = a.k {
                j.k_min = lo;
                j.k_max = hi;
            }
            set(&mut j.n_pullback, a.n_pullback);
            set(&mut j.tolerance, a.tolerance);
            cfg.validate("julia-spheres")?;
            let rows = julia::rows(&cfg)?;
            let passed = julia::passed(&cfg, &rows);
            emit(a.common.output.as_deref(), julia::to_csv(&config_json(&cfg)?, &cfg, &rows).as_bytes())?;
            Ok(passed)
        }
        Command::RenderSlice(a) => {
            let mut cfg = resolve(&a.common)?;
            let r = &mut cfg.render;
            set(&mut r.plane, a.plane);
            set(&mut r.t_min, a.t_min);
            set(&mut r.t_max, a.t_max);
            set(&mut r.theta_min, a.theta_min);
            set(&mut r.theta_max, a.theta_max);
            set(&mut r.width, a.width);
            set(&mut r.height, a.height);
            set(&mut r.max_iter, a.max_iter);
            set(&mut r.threshold_level, a.threshold_level);
            if a.no_overlays {
                r.overlays = false;
            }
            cfg.validate("render-slice")?;
            let pixels = render::render(&cfg)?;
            emit(a.common.output.as_deref(), &render::to_ppm(&config_json(&cfg)?, &cfg, &pixels))?;
            Ok(true)
        }
        Command::GrowthDesign(a) => {
            let mut cfg = resolve(&a.common)?;
            let g = &mut cfg.growth;
            set(&mut g.mode, a.mode);
            set(&mut g.log_r, a.log_r);
            set(&mut g.log_t, a.log_t.clone());
            set(&mut g.eta, a.eta.clone());
            set(&mut g.eps, a.eps.clone());
            cfg.validate("growth-design")?;
            let out = growth::run(&cfg)?;
            let passed = out.report.passed();
            emit_json(&a.common, "growth-design", &cfg, passed, out)
        }
        Command::Orbit(a) => {
            let mut cfg = resolve(&a.common)?;
            let o = &mut cfg.orbit;
            set(&mut o.level, a.level);
            set(&mut o.offset, a.offset);
            set(&mut o.y1, a.y1);
            set(&mut o.y2, a.y2);
            set(&mut o.steps, a.steps);
            cfg.validate("orbit")?;
            let out = orbit::run(&cfg)?;
            emit_json(&a.common, "orbit", &cfg, true, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qr3: {e}");
            ExitCode::from(2)
        }
    }
}
