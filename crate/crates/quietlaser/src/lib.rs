//! Experiment drivers behind the `qnl` command.
//!
//! Every experiment takes its parsed arguments, runs on an [`Execution`]
//! (parallel over runs unless built without the `parallel` feature, capped
//! by `QNL_THREADS`) and returns a data [`Table`] plus a summary [`Report`]
//! holding analytic targets, estimates, standard errors and pass flags.
//! Runs draw from per-run RNG streams and are reduced in run order, so the
//! output bytes do not depend on the worker count.

pub mod experiments;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

pub use qnl_ensemble::Execution;
pub use report::{Cell, Metric, Outcome, Report, Table};

/// Master seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1_964;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error(transparent)]
    Math(#[from] qnl_math::MathError),
    #[error(transparent)]
    Points(#[from] qnl_points::PointError),
    #[error(transparent)]
    Pendulum(#[from] qnl_pendulum::PendulumError),
    #[error(transparent)]
    TwoLevel(#[from] qnl_twolevel::TwoLevelError),
    #[error(transparent)]
    Circuit(#[from] qnl_circuits::CircuitError),
    #[error(transparent)]
    Cavity(#[from] qnl_cavity::CavityError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    /// Data table; the summary goes next to `--out` as `<out>.summary.json`
    #[default]
    Csv,
    /// Summary report only
    Json,
}

/// Flags shared by every experiment.
#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct Common {
    /// Number of independent runs (each experiment has its own default)
    #[arg(long)]
    pub runs: Option<usize>,
    /// Master seed; run r always draws from stream r of this seed
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output file (standard output when absent)
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    #[serde(skip)]
    pub format: Format,
}

impl Common {
    pub fn runs_or(&self, default: usize) -> Result<usize> {
        match self.runs.unwrap_or(default) {
            0 => Err(CliError::Param("--runs must be at least 1".into())),
            n => Ok(n),
        }
    }
}

/// Counts such as `1e7` or `10000000`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(63) {
        Ok(x as u64)
    } else {
        Err(format!("not a non-negative integer: {s}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qnl",
    version,
    about = "Quiet-laser noise experiments: simulations checked against closed forms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Marked-Poisson pendulum: spectrum of the dissipated power
    Pendulum(experiments::pendulum::PendulumArgs),
    /// Point-process statistics with optional thinning and superposition
    Points(experiments::points::PointsArgs),
    /// Dark-room process: correlation, spectrum and count variance
    Darkroom(experiments::points::DarkroomArgs),
    /// Generalized Rabi equations against the closed-form population
    Rabi(experiments::twolevel::RabiArgs),
    /// Waiting-time laws of the driven two-level system
    Waiting(experiments::twolevel::WaitingArgs),
    /// Tuned-circuit response, identities and thermal balance
    Circuit(experiments::circuit::CircuitArgs),
    /// Photocounts from a potential source across a noisy conductance
    Cstate(experiments::circuit::CStateArgs),
    /// Photon statistics of an isolated cavity with N atoms
    Cavity(experiments::cavity::CavityArgs),
    /// Reference integrals, cubic solver and bi-complex inverse
    Integrals(experiments::integrals::IntegralsArgs),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Pendulum(a) => &a.common,
            Command::Points(a) => &a.common,
            Command::Darkroom(a) => &a.common,
            Command::Rabi(a) => &a.common,
            Command::Waiting(a) => &a.common,
            Command::Circuit(a) => &a.common,
            Command::Cstate(a) => &a.common,
            Command::Cavity(a) => &a.common,
            Command::Integrals(a) => &a.common,
        }
    }

    pub fn run(&self, exec: Execution) -> Result<Outcome> {
        match self {
            Command::Pendulum(a) => experiments::pendulum::run(a, exec),
            Command::Points(a) => experiments::points::run_points(a, exec),
            Command::Darkroom(a) => experiments::points::run_darkroom(a, exec),
            Command::Rabi(a) => experiments::twolevel::run_rabi(a),
            Command::Waiting(a) => experiments::twolevel::run_waiting(a),
            Command::Circuit(a) => experiments::circuit::run_circuit(a),
            Command::Cstate(a) => experiments::circuit::run_cstate(a, exec),
            Command::Cavity(a) => experiments::cavity::run(a, exec),
            Command::Integrals(a) => experiments::integrals::run(a),
        }
    }
}

/// Writes the table and/or the JSON summary as `--format` and `--out` ask.
/// A CSV file at `PATH` gets its summary at `PATH.summary.json`.
pub fn emit(outcome: &Outcome, common: &Common) -> Result<()> {
    use std::io::Write;
    match (common.format, &common.out) {
        (Format::Csv, Some(path)) => {
            outcome.table.write_csv(std::fs::File::create(path)?)?;
            let mut summary = path.clone().into_os_string();
            summary.push(".summary.json");
            std::fs::write(summary, outcome.report.to_json()?)?;
        }
        (Format::Csv, None) => {
            let stdout = std::io::stdout();
            outcome.table.write_csv(stdout.lock())?;
        }
        (Format::Json, Some(path)) => std::fs::write(path, outcome.report.to_json()?)?,
        (Format::Json, None) => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(outcome.report.to_json()?.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}
