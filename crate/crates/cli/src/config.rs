//! Run configuration: flags override the config file, which overrides defaults.

use std::fs;
use std::path::{Path, PathBuf};

use covnoise::matrices::config::MatrixConfig;
use covnoise::{IndexDomain, IndexWindow, StructureMatrix};
use serde::Deserialize;

use crate::output::Format;
use crate::Failure;

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub matrix: Option<MatrixConfig>,
    pub tolerance: Option<f64>,
    pub window: Option<IndexWindow>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::config(format!("config {}: {e}", path.display())))
    }
}

/// Flag values as given on the command line.
#[derive(Debug, Default, Clone)]
pub struct Flags {
    pub matrix: Option<String>,
    pub config: Option<PathBuf>,
    pub tol: Option<f64>,
    pub window: Option<IndexWindow>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub matrix: Option<MatrixConfig>,
    pub tolerance: f64,
    pub window: Option<IndexWindow>,
    pub format: Format,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

/// `--matrix` takes inline JSON or a path to a JSON file.
fn matrix_from_flag(arg: &str) -> Result<MatrixConfig, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::config(format!("cannot read matrix file {arg}: {e}")))?
    };
    Ok(MatrixConfig::from_json(&text)?)
}

impl RunConfig {
    pub fn resolve(flags: Flags) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let matrix = match &flags.matrix {
            Some(m) => Some(matrix_from_flag(m)?),
            None => file.matrix,
        };
        let tolerance = flags.tol.or(file.tolerance).unwrap_or(DEFAULT_TOL);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Failure::config(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(RunConfig {
            matrix,
            tolerance,
            window: flags.window.or(file.window),
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            out: flags.out,
        })
    }

    pub fn matrix(&self) -> Result<StructureMatrix, Failure> {
        match &self.matrix {
            Some(m) => Ok(m.build()?),
            None => Err(Failure::config("no matrix given; pass --matrix or set \"matrix\" in --config")),
        }
    }

    /// The configured window, or 128 indices starting at 0 (ℕ) or centered (ℤ).
    pub fn window_for(&self, domain: IndexDomain) -> IndexWindow {
        self.window.unwrap_or_else(|| default_window(domain))
    }
}

pub fn default_window(domain: IndexDomain) -> IndexWindow {
    match domain {
        IndexDomain::Naturals => IndexWindow::new(0, 127),
        IndexDomain::Integers => IndexWindow::new(-64, 63),
    }
    .expect("static window")
}

/// Inclusive index range `lo:hi` that may be empty (`lo > hi`), or a single index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: i64,
    pub hi: i64,
}

impl IndexRange {
    pub fn window(&self) -> Option<IndexWindow> {
        IndexWindow::new(self.lo, self.hi).ok()
    }
}

impl std::str::FromStr for IndexRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}"));
        match s.split_once(':') {
            Some((a, b)) => Ok(IndexRange { lo: parse(a)?, hi: parse(b)? }),
            None => {
                let n = parse(s)?;
                Ok(IndexRange { lo: n, hi: n })
            }
        }
    }
}
