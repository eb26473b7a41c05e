//! Command-line front end for the zitter toolkit.
//!
//! [`run`] is the whole program minus process plumbing, so tests can drive
//! it in-process and compare outputs byte for byte.

pub mod checks;
pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;
use zitter::par::Execution;

use crate::commands::Emit;
use crate::config::{ConfigError, ConstantSet, FieldKind, FreeModeChoice, RadialModelChoice, RunConfig, Units};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Channel(#[from] zitter::channeling::ChannelError),
    #[error(transparent)]
    Dynamics(#[from] zitter::zitter::ZitterError),
    #[error("cannot write {0}: {1}")]
    Output(String, std::io::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

pub const EXIT_OK: i32 = 0;
/// An invariant or oracle check failed, or a run could not complete.
pub const EXIT_FAILURE: i32 = 1;
/// Bad flags or configuration.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "zitter", version, about = "Zitter electron model: dynamics, channeling resonance and Dirac checks")]
struct Cli {
    /// JSON run configuration; flags override its keys.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Write the CSV/JSON table here instead of standard output.
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,
    #[arg(long, global = true, value_enum)]
    constants: Option<ConstantSet>,
    /// Worker threads for scans (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Largest accepted invariant drift or closed-form error.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed for random samples in selftest and dirac-check.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Algebra, dynamics, Floquet and Dirac checks plus the modulation-frequency report.
    Selftest,
    /// Free particle: lightlike runs are integrated and compared with the closed form.
    Free(FreeArgs),
    /// Integrate in a uniform field or the channeling string field.
    Simulate(SimulateArgs),
    /// Radial oscillation of a channeled orbit under the zitter drive.
    ChannelOrbit(OrbitArgs),
    /// Resonance scan over beam momentum.
    ChannelScan(ScanArgs),
    /// Floquet exponents of x'' + q(1 + h cos wt)x = 0 on a (q, h) grid.
    Floquet(FloquetArgs),
    /// Plane-wave and gauge checks of the real Dirac equation.
    DiracCheck(DiracArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    periods: Option<usize>,
    #[arg(long)]
    steps_per_period: Option<usize>,
    #[arg(long)]
    record_every: Option<usize>,
}

#[derive(Debug, Args)]
struct FreeArgs {
    #[arg(long, value_enum)]
    mode: Option<FreeModeChoice>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    field: Option<FieldKind>,
    /// Start radius from the string axis (Å).
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    longitudinal: bool,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct OrbitArgs {
    /// Beam momentum (MeV/c); the resonant momentum by default.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long, value_enum)]
    model: Option<RadialModelChoice>,
    /// Atomic spacings to traverse.
    #[arg(long)]
    atoms: Option<f64>,
    #[arg(long)]
    steps_per_period: Option<usize>,
    #[arg(long)]
    record_every: Option<usize>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    r0_samples: Option<usize>,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct FloquetArgs {
    #[arg(long)]
    q_min: Option<f64>,
    #[arg(long)]
    q_max: Option<f64>,
    #[arg(long)]
    q_steps: Option<usize>,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    h_max: Option<f64>,
    #[arg(long)]
    h_steps: Option<usize>,
    #[arg(long)]
    omega: Option<f64>,
}

#[derive(Debug, Args)]
struct DiracArgs {
    #[arg(long)]
    json: bool,
    /// Random plane waves and gauge elements to test.
    #[arg(long)]
    samples: Option<usize>,
}

fn set<T>(target: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *target = v;
    }
}

fn apply_run(cfg: &mut RunConfig, run: &RunArgs) {
    set(&mut cfg.periods, run.periods);
    set(&mut cfg.steps_per_period, run.steps_per_period);
    set(&mut cfg.record_every, run.record_every);
}

/// Config file, then global flags, then subcommand flags.
fn resolve(cli: Cli) -> Result<(RunConfig, Command), ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => config::load_config(path)?,
        None => RunConfig::default(),
    };
    if cli.output.is_some() {
        cfg.output = cli.output;
    }
    set(&mut cfg.units, cli.units);
    set(&mut cfg.constants, cli.constants);
    set(&mut cfg.workers, cli.workers);
    set(&mut cfg.tolerance, cli.tolerance);
    set(&mut cfg.seed, cli.seed);
    match &cli.command {
        Command::Selftest => {}
        Command::Free(a) => {
            set(&mut cfg.mode, a.mode);
            apply_run(&mut cfg, &a.run);
        }
        Command::Simulate(a) => {
            set(&mut cfg.field, a.field);
            set(&mut cfg.r0_angstrom, a.r0);
            cfg.longitudinal |= a.longitudinal;
            apply_run(&mut cfg, &a.run);
        }
        Command::ChannelOrbit(a) => {
            set(&mut cfg.p_mev, a.p.map(Some));
            set(&mut cfg.r0_angstrom, a.r0);
            set(&mut cfg.radial_model, a.model);
            set(&mut cfg.orbit_atoms, a.atoms.map(Some));
            set(&mut cfg.radial_steps_per_period, a.steps_per_period);
            set(&mut cfg.record_every, a.record_every);
        }
        Command::ChannelScan(a) => {
            set(&mut cfg.p_min_mev, a.p_min);
            set(&mut cfg.p_max_mev, a.p_max);
            set(&mut cfg.scan_steps, a.steps);
            set(&mut cfg.r0_samples, a.r0_samples);
        }
        Command::Floquet(a) => {
            set(&mut cfg.floquet_q_min, a.q_min);
            set(&mut cfg.floquet_q_max, a.q_max);
            set(&mut cfg.floquet_q_steps, a.q_steps);
            set(&mut cfg.floquet_h_min, a.h_min);
            set(&mut cfg.floquet_h_max, a.h_max);
            set(&mut cfg.floquet_h_steps, a.h_steps);
            set(&mut cfg.floquet_omega, a.omega);
        }
        Command::DiracCheck(a) => set(&mut cfg.gauge_samples, a.samples),
    }
    cfg.validate()?;
    Ok((cfg, cli.command))
}

fn dispatch(cfg: &RunConfig, command: &Command, out: &mut dyn Write) -> Result<bool, CliError> {
    let name = match command {
        Command::Selftest => "selftest",
        Command::Free(_) => "free",
        Command::Simulate(_) => "simulate",
        Command::ChannelOrbit(_) => "channel-orbit",
        Command::ChannelScan(_) => "channel-scan",
        Command::Floquet(_) => "floquet",
        Command::DiracCheck(_) => "dirac-check",
    };
    let mut emit = Emit { out, command: name, hash: cfg.hash(name), output: cfg.output.clone() };
    match command {
        Command::Selftest => commands::selftest(&mut emit, cfg),
        Command::Free(_) => commands::free(&mut emit, cfg),
        Command::Simulate(_) => commands::simulate(&mut emit, cfg),
        Command::ChannelOrbit(_) => commands::channel_orbit(&mut emit, cfg),
        Command::ChannelScan(a) => {
            let execution = if a.sequential { Execution::Sequential } else { Execution::Parallel };
            commands::channel_scan(&mut emit, cfg, execution)
        }
        Command::Floquet(_) => commands::floquet(&mut emit, cfg),
        Command::DiracCheck(a) => commands::dirac_check(&mut emit, cfg, a.json),
    }
}

/// Runs one invocation; `args` includes the program name. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let outcome = resolve(cli).map_err(CliError::from).and_then(|(cfg, command)| dispatch(&cfg, &command, out));
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
