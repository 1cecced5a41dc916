//! zeno-lab: survival curves, effective-rate sweeps, QZE/IZE transition
//! points, and discretized-bath oracle comparisons as deterministic CSV.
//!
//! Exit codes: 0 ok, 1 config or I/O error, 2 numerical failure,
//! 3 no transition where one was required.

mod commands;
mod config;
mod output;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use zeno_core::ZenoError;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io { path: String, message: String },
    Numerical(ZenoError),
    MissingTransition(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io { path, message } => write!(f, "I/O error at '{path}': {message}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::MissingTransition(schemes) => {
                write!(f, "no transition found for required scheme(s): {schemes}")
            }
        }
    }
}

impl From<ZenoError> for CliError {
    fn from(e: ZenoError) -> Self {
        match e {
            ZenoError::Domain(msg) => CliError::Config(msg),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
            CliError::MissingTransition(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "zeno-lab",
    version,
    about = "Zeno / inverse-Zeno decay rates of an unstable level under pulsed, continuous, and Rabi monitoring"
)]
struct Cli {
    /// Config file with `key = value` lines; flags override its entries
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Initial-state energy (units of Lambda)
    #[arg(long, global = true)]
    omega_a: Option<f64>,
    /// Coupling strength of the Lorentzian form factor
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Bandwidth Lambda of the Lorentzian form factor
    #[arg(long, global = true)]
    big_lambda: Option<f64>,
    /// Measurement scheme: pulsed | continuous | rabi
    #[arg(long, global = true)]
    scheme: Option<String>,
    /// Lower edge of the control/time grid
    #[arg(long, global = true)]
    grid_min: Option<f64>,
    /// Upper edge of the control/time grid
    #[arg(long, global = true)]
    grid_max: Option<f64>,
    /// Number of grid points
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Grid spacing: lin | log
    #[arg(long, global = true)]
    grid_scale: Option<String>,
    /// Bath modes used by the oracle
    #[arg(long, global = true)]
    n_modes: Option<usize>,
    /// Time horizon for the oracle comparison
    #[arg(long, global = true)]
    horizon: Option<f64>,
    /// Output CSV path
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Optional SVG line chart of the primary columns
    #[arg(long, global = true, value_name = "FILE")]
    svg: Option<PathBuf>,
    /// Exit with code 3 if any scheme reports NO_TRANSITION
    #[arg(long, global = true)]
    require_transition: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Survival probability P(t) with its exponential envelopes
    Survival,
    /// Effective decay rate across a control-parameter grid
    Rates,
    /// QZE/IZE transition points tau*, Gamma*, K* for all three schemes
    Transition,
    /// Discretized-bath evolution against the closed form
    Oracle,
}

fn assemble_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        let body = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        config.apply_file(&body)?;
    }
    if let Some(v) = cli.omega_a {
        config.omega_a = v;
    }
    if let Some(v) = cli.lambda {
        config.lambda = v;
    }
    if let Some(v) = cli.big_lambda {
        config.big_lambda = v;
    }
    if let Some(v) = &cli.scheme {
        config.scheme = config::Scheme::parse(v)?;
    }
    if let Some(v) = cli.grid_min {
        config.grid_min = v;
    }
    if let Some(v) = cli.grid_max {
        config.grid_max = v;
    }
    if let Some(v) = cli.grid_points {
        config.grid_points = v;
    }
    if let Some(v) = &cli.grid_scale {
        config.grid_scale = config::GridScale::parse(v)?;
    }
    if let Some(v) = cli.n_modes {
        config.n_modes = v;
    }
    if let Some(v) = cli.horizon {
        config.horizon = v;
    }
    if let Some(v) = &cli.out {
        config.out = Some(v.clone());
    }
    config.validate()?;
    Ok(config)
}

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Config(e.to_string())),
    };
    let config = assemble_config(&cli)?;
    let svg = cli.svg.as_deref();
    match cli.command {
        Command::Survival => commands::cmd_survival(&config, svg),
        Command::Rates => commands::cmd_rates(&config, svg),
        Command::Transition => {
            if svg.is_some() {
                return Err(CliError::Config(
                    "--svg is not supported for the transition table".into(),
                ));
            }
            commands::cmd_transition(&config, cli.require_transition)
        }
        Command::Oracle => commands::cmd_oracle(&config, svg),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zeno-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
