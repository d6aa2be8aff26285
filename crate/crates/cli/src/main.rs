//! `covnoise`: noise tables, observable sections and Schur-multiplier reports.

mod commands;
mod config;
mod output;
mod verify;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use covnoise::IndexWindow;

use config::{Flags, IndexRange, RunConfig};
use output::{Format, Report};

pub const EXIT_CHECK: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure { code: EXIT_CONFIG, message: message.into() }
    }

    pub fn check(message: impl Into<String>) -> Self {
        Failure { code: EXIT_CHECK, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<covnoise::Error> for Failure {
    fn from(e: covnoise::Error) -> Self {
        use covnoise::Error::*;
        let code = match &e {
            Resource { .. } => EXIT_RESOURCE,
            Contract(_) | NonConvergence { .. } => EXIT_CHECK,
            Usage(_) | Parse(_) | DomainMismatch { .. } | NotUnitVector { .. } => EXIT_CONFIG,
        };
        Failure { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "covnoise", version, about = "Noise sequences of structure matrices and covariant observables")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Matrix specification: inline JSON or a path to a JSON file.
    #[arg(long, global = true)]
    matrix: Option<String>,
    /// JSON run configuration (matrix, tolerance, window, format, seed).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Requested absolute accuracy [default: 1e-8].
    #[arg(long, global = true, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Index window `lo:hi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<IndexWindow>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// s_n(l) brackets for every (n, l).
    NoiseTable {
        #[arg(long, value_delimiter = ',', default_value = "2")]
        l: Vec<u32>,
        /// Range `lo:hi`; empty when lo > hi.
        #[arg(long, default_value = "0:10", allow_hyphen_values = true)]
        n: IndexRange,
    },
    /// Three-point look at the large-n behavior of s_n(l).
    Asymptotic {
        #[arg(long, default_value_t = 2)]
        l: u32,
        #[arg(long, default_value_t = 4096)]
        horizon: i64,
    },
    /// Run a named cross-check suite.
    Verify {
        #[arg(long, value_enum)]
        suite: verify::Suite,
    },
    /// Dump the section of E(X) or of the moment operator E[k].
    Observable {
        /// Interval set such as `0:pi` or `0:pi/2,pi:3*pi/2`.
        #[arg(long)]
        interval: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
        moment: Option<u32>,
    },
    /// Largest covariance defect of E(X) under the shift x.
    CovarianceCheck {
        #[arg(long)]
        interval: String,
        /// Shift, an expression such as `pi/3`.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        shift: String,
        #[arg(long, default_value_t = 1e-12, allow_hyphen_values = true)]
        bound: f64,
    },
    /// Diagonal of the noise operator against the summed s_n(2).
    NoiseDiagonal {
        #[arg(long, allow_hyphen_values = true)]
        n: IndexRange,
    },
    /// Norm growth of |i_[0,pi]| sections.
    SchurGrowth {
        #[arg(long, value_delimiter = ',', default_value = "5,55,555")]
        r: Vec<u64>,
    },
    /// Normalized Sylvester-Hadamard matrices and their moduli.
    Hadamard {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        p: Vec<u32>,
        /// Report the block-diagonal sum up to the largest p instead.
        #[arg(long)]
        block: bool,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    let c = cli.common;
    let cfg = RunConfig::resolve(Flags {
        matrix: c.matrix,
        config: c.config,
        tol: c.tol,
        window: c.window,
        format: c.format,
        seed: c.seed,
        out: c.out,
    })?;
    let (report, failed): (Report, Option<String>) = match cli.command {
        Command::NoiseTable { l, n } => (commands::noise_table(&cfg, &l, n)?, None),
        Command::Asymptotic { l, horizon } => (commands::asymptotic(&cfg, l, horizon)?, None),
        Command::Verify { suite } => verify::run(&cfg, suite)?,
        Command::Observable { interval, moment } => (commands::observable(&cfg, &interval, moment)?, None),
        Command::CovarianceCheck { interval, shift, bound } => commands::covariance_check(&cfg, &interval, &shift, bound)?,
        Command::NoiseDiagonal { n } => commands::noise_diagonal(&cfg, n)?,
        Command::SchurGrowth { r } => (commands::schur_growth(&r)?, None),
        Command::Hadamard { p, block } => (commands::hadamard(&p, block)?, None),
    };
    let text = report.render(cfg.format);
    match &cfg.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    match failed {
        Some(msg) => Err(Failure::check(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("covnoise: {f}");
            ExitCode::from(f.code)
        }
    }
}
