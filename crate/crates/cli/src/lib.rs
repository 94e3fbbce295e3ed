//! The `pga` command line: loads group, cocycle and function definitions,
//! runs verification suites and transforms, and writes JSON reports.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 for unreadable or inconsistent input.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod commands;
pub mod input;
pub mod output;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepKind {
    Formal,
    Character,
    Matrix,
}

impl RepKind {
    pub fn name(self) -> &'static str {
        match self {
            RepKind::Formal => "formal",
            RepKind::Character => "character",
            RepKind::Matrix => "matrix",
        }
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let digits = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(digits, 16).map_err(|e| format!("seed must be hexadecimal: {e}"))
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Group definition (JSON).
    #[arg(long, global = true)]
    pub group: Option<PathBuf>,
    /// Cocycle definition (JSON); the zero cocycle when absent.
    #[arg(long, global = true)]
    pub cocycle: Option<PathBuf>,
    /// Function file (JSON list of {element, re, im}).
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Second function file for `convolve`.
    #[arg(long, global = true)]
    pub in2: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub rep: Option<RepKind>,
    /// Replaces the tolerance of every check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for sampled checks, in hexadecimal.
    #[arg(long, global = true, value_parser = parse_seed, default_value = "0x5EED")]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Matrix size for `clockshift`.
    #[arg(long, global = true)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Run every verification suite that applies to the group and cocycle.
    Verify,
    /// Transform a function and check Plancherel and the round trip.
    Fourier,
    /// Deformed convolution of two functions with the transform cross-check.
    Convolve,
    /// Consistency report for the n×n clock and shift matrices.
    Clockshift,
    /// Summarize a stored report.
    Report,
}

#[derive(Debug, Parser)]
#[command(name = "pga", version, about = "Projective group algebra verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let opts = &cli.options;
    if opts.tol.is_some_and(|t| t.is_nan() || t <= 0.0) {
        eprintln!("error: --tol must be positive");
        return 2;
    }
    let result = match cli.command {
        Command::Verify => commands::verify(opts),
        Command::Fourier => commands::fourier_cmd(opts),
        Command::Convolve => commands::convolve(opts),
        Command::Clockshift => commands::clockshift(opts),
        Command::Report => commands::report(opts),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
