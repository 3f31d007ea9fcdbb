//! Command-line front end: reads function specifications, runs the
//! factorization, kernel and spectral pipelines and writes JSON reports with
//! optional CSV side tables.
//!
//! Exit codes: 0 all checks pass, 2 invalid arguments or spec, 3 a check
//! failed, 4 a check was inconclusive, 5 numerical or I/O failure.

pub mod commands;
pub mod complex_arg;
pub mod report;
pub mod spec;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 5,
        }
    }
}

impl From<nsym_model::Error> for CliError {
    fn from(e: nsym_model::Error) -> Self {
        fn domain(e: &nsym_model::Error) -> bool {
            match e {
                nsym_model::Error::Domain(_) => true,
                nsym_model::Error::Kernel { source, .. } => domain(source),
                _ => false,
            }
        }
        if domain(&e) {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nsym-model", version, about = "Factorization, kernel and index computations for symmetric meromorphic functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zeros, poles and inner/outer structure of the input.
    Factor(RunArgs),
    /// Coprime pair (h₁, h₂) with f = i(h₂ − h₁)/(h₂ + h₁).
    Helson(RunArgs),
    /// Kernel Gram matrix and its inertia.
    Gram(RunArgs),
    /// Negative index from Gram inertia, compared with root counts.
    Index(RunArgs),
    /// Number of solutions of f(ζ) = w in the upper half-plane.
    Roots(RunArgs),
    /// Density recovered from boundary values of a Herglotz function.
    Stieltjes(RunArgs),
    /// Every identity verifier that applies to the input.
    VerifyAll(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Factor(_) => "factor",
            Command::Helson(_) => "helson",
            Command::Gram(_) => "gram",
            Command::Index(_) => "index",
            Command::Roots(_) => "roots",
            Command::Stieltjes(_) => "stieltjes",
            Command::VerifyAll(_) => "verify-all",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Factor(a)
            | Command::Helson(a)
            | Command::Gram(a)
            | Command::Index(a)
            | Command::Roots(a)
            | Command::Stieltjes(a)
            | Command::VerifyAll(a) => a,
        }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Function specification (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Report destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Residual tolerance for identity checks.
    #[arg(long, default_value = "1e-8", value_parser = positive)]
    pub tol: f64,
    /// Seed for all sampled points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of sample points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Complex parameter, e.g. "-1i" or "2-3i".
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Explicit comma-separated sample points, e.g. "i,2i".
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Height above the real axis for Stieltjes inversion.
    #[arg(long, value_parser = positive)]
    pub eps: Option<f64>,
    /// Side table destination (Gram entries or density samples).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Record wall-clock time in the report (breaks byte-identical output).
    #[arg(long)]
    pub timing: bool,
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    match execute_inner(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute_inner(cli: &Cli) -> Result<i32, CliError> {
    let args = cli.command.args();
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| CliError::Validation(format!("cannot read spec {}: {e}", args.spec.display())))?;
    let specs = spec::parse_specs(&text)?;
    let start = Instant::now();
    let outcome = commands::run(&cli.command, &specs)?;
    let mut report = outcome.report;
    if args.timing {
        report.wall_ms = start.elapsed().as_millis() as u64;
    }
    let bytes = report.to_bytes();
    match &args.out {
        Some(p) => std::fs::write(p, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    if let (Some(path), Some(table)) = (&args.csv, &outcome.table) {
        table.write(path)?;
    }
    Ok(report.exit_code())
}
