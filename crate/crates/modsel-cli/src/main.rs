//! `modsel`: energy planning for duty-cycled sensor links.
//!
//! Subcommands: `sweep`, `tables`, `validate-ser`, `compare-ook`,
//! `optimize`. Precedence of settings: built-in evaluation profiles, then
//! `--config` file fields, then command-line flags.
//!
//! Exit codes: 0 success, 1 configuration error, 2 validation failure,
//! 3 numeric non-convergence.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Axis, Table};
use config::ScenarioConfig;

#[derive(Debug)]
pub enum AppError {
    Config(anyhow::Error),
    Validation(String),
    NonConvergence(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Config(_) => 1,
            AppError::Validation(_) => 2,
            AppError::NonConvergence(_) => 3,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Config(e) => write!(f, "{e:#}"),
            AppError::Validation(msg) => write!(f, "validation failed: {msg}"),
            AppError::NonConvergence(msg) => write!(f, "non-convergence: {msg}"),
        }
    }
}

impl From<anyhow::Error> for AppError {
    fn from(e: anyhow::Error) -> Self {
        AppError::Config(e)
    }
}

#[derive(Parser)]
#[command(
    name = "modsel",
    version,
    about = "Energy models, constellation optimization, and SER validation for duty-cycled sensor links"
)]
struct Cli {
    /// Scenario file (JSON; any subset of fields overrides the defaults).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted). Written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Randomness stream for Monte Carlo runs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Target symbol error rate.
    #[arg(long, global = true)]
    ps: Option<f64>,
    /// Link distance in meters.
    #[arg(long, global = true)]
    d: Option<f64>,
    /// Path-loss exponent.
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Constellation-size grid, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    m_grid: Option<Vec<u32>>,
    /// Distance grid in meters, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    d_grid: Option<Vec<f64>>,
    /// Path-loss exponent grid, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    eta_grid: Option<Vec<f64>>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy sweep along one axis (m, d, eta, or b_eff).
    Sweep {
        /// The single sweep axis.
        #[arg(long, value_enum)]
        axis: Axis,
        /// Schemes to include, comma separated (ncmfsk, mqam, oqpsk, ook).
        #[arg(long, value_delimiter = ',')]
        schemes: Option<Vec<String>>,
        /// Fixed scheme for d/eta sweeps.
        #[arg(long)]
        scheme: Option<String>,
        /// Fixed constellation size for d/eta sweeps.
        #[arg(long)]
        m: Option<u32>,
    },
    /// Reproduce a reference table (iii: MQAM optima, iv: selected scheme,
    /// v: Rician-fading energies).
    Tables {
        #[arg(long, value_enum)]
        which: Table,
    },
    /// Monte Carlo validation of the SER bounds; exit 2 on any violation.
    ValidateSer {
        /// Symbols per grid point.
        #[arg(long, default_value_t = 1_000_000)]
        n_symbols: u64,
    },
    /// Per-bit energy of optimized NC-MFSK vs pulsed OOK over distance.
    CompareOok,
    /// Scheme selection at one link: ranking and winner.
    Optimize,
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig, AppError> {
    use anyhow::Context;
    let mut cfg = match &cli.config {
        None => ScenarioConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            ScenarioConfig::from_json_overrides(&text)?
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(ps) = cli.ps {
        cfg.ps = ps;
    }
    if let Some(d) = cli.d {
        cfg.d_m = d;
    }
    if let Some(eta) = cli.eta {
        cfg.eta = eta;
    }
    if let Some(g) = &cli.m_grid {
        cfg.m_grid = g.clone();
    }
    if let Some(g) = &cli.d_grid {
        cfg.d_grid = g.clone();
    }
    if let Some(g) = &cli.eta_grid {
        cfg.eta_grid = g.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let mut cfg = load_config(cli)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Sweep { axis, schemes, scheme, m } => {
            if let Some(s) = scheme {
                cfg.scheme = s.clone();
            }
            if let Some(m) = m {
                cfg.m = *m;
            }
            let default_schemes = vec!["ncmfsk".to_string(), "mqam".to_string()];
            let schemes = schemes.clone().unwrap_or(default_schemes);
            commands::cmd_sweep(&cfg, *axis, &schemes, out)
        }
        Command::Tables { which } => commands::cmd_tables(&cfg, *which, out),
        Command::ValidateSer { n_symbols } => commands::cmd_validate_ser(&cfg, *n_symbols, out),
        Command::CompareOok => commands::cmd_compare_ook(&cfg, out),
        Command::Optimize => commands::cmd_optimize(&cfg, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
