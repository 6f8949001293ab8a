//! Command-line front end for `frechet-core`.
//!
//! Each subcommand reads a JSON problem file, runs one library operation and
//! writes a JSON report (stdout by default). Exit codes: 0 success, 1 internal
//! failure, 2 infeasible target, 3 invalid input, 4 ray enumeration refused
//! because of the dimension cap.

pub mod commands;
pub mod report;
pub mod spec;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use report::Report;
pub use spec::{Mode, ProblemSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_RAY_CAP: i32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

impl From<frechet_core::Error> for CliError {
    fn from(e: frechet_core::Error) -> Self {
        use frechet_core::Error as E;
        let code = match e {
            E::RayDimensionCap { .. } => EXIT_RAY_CAP,
            E::EmptyCone => EXIT_INFEASIBLE,
            E::Numerical(_) => EXIT_FAILURE,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "frechet",
    version,
    about = "Multivariate Bernoulli distributions with given margins"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Enumerate the ray densities of the class.
    Rays,
    /// Attainable ranges of every pair moment and correlation.
    Bounds,
    /// Find a density matching the targets, or prove there is none.
    Fit,
    /// Project the target onto the nearest attainable correlations.
    Nearest,
    /// Fit while minimizing the mass of the moments of order >= 3.
    Minimize,
    /// Draw a reproducible sample from a density.
    Sample,
    /// FGM coefficients of a density.
    Theta,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Problem file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// CSV export (rays: one ray per column; sample: one draw per row).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Emit support vectors in complemented order (row k holds point !k).
    #[arg(long, global = true)]
    pub paper_order: bool,
    /// Sampler seed (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Sample size (default 10000).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Decimal places in the `decimal` renderings.
    #[arg(long, global = true, default_value_t = 12)]
    pub precision: usize,
    /// Density file for `theta` and `sample`: a report with a `density`
    /// block or a bare JSON array.
    #[arg(long, global = true)]
    pub density: Option<PathBuf>,
    /// Largest dimension for ray enumeration (at most 7).
    #[arg(long, global = true, default_value_t = frechet_core::rays::DEFAULT_RAY_DIMENSION_CAP)]
    pub ray_cap: usize,
}

/// A finished command: its report, optional CSV, and exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
    pub code: i32,
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

/// Writes via a sibling temporary file and a rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)
        .and_then(|()| fs::rename(&tmp, path))
        .map_err(|e| CliError::failure(format!("{}: {e}", path.display())))
}

/// Prints to stdout, treating a closed pipe as success.
fn print_stdout(text: &str) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    match writeln!(out, "{text}").and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::failure(e.to_string())),
        _ => Ok(()),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    commands::dispatch(cli.command, &cli.args)
}

/// Runs the command, writes its outputs and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|outcome| {
        let json = serde_json::to_string_pretty(&outcome.report)
            .map_err(|e| CliError::failure(e.to_string()))?;
        match &cli.args.output {
            Some(path) => write_atomic(path, &(json + "\n"))?,
            None => print_stdout(&json)?,
        }
        if let (Some(path), Some(csv)) = (&cli.args.csv, &outcome.csv) {
            write_atomic(path, csv)?;
        }
        Ok(outcome.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
