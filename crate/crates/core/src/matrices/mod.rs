//! Structure matrices on ℕ² and ℤ² as pure entry oracles.
//!
//! The objects are infinite, so a [`StructureMatrix`] never stores entries;
//! dense sections are materialized only through [`truncate`] with an explicit
//! [`IndexWindow`].

mod builders;
pub mod config;
mod phases;

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

pub use builders::{
    chessboard, constant_one, gram_from_vectors, modulus, phase_conjugate_multiplier,
    schur_product, torus_from_phases, ChessboardParams, Orientation, VectorFamily,
};
pub use phases::{torus_phase_recovery, PhaseRecoveryFailure, PhaseSequence};

/// Matrix index. ℕ indices are the nonnegative values.
pub type Index = i64;

/// Default cap on the side length of a dense section.
pub const DEFAULT_MAX_WINDOW: usize = 4096;

/// Environment variable that overrides [`DEFAULT_MAX_WINDOW`].
pub const MAX_WINDOW_ENV: &str = "COVNOISE_MAX_WINDOW";

/// Side-length cap for dense sections, read once from `COVNOISE_MAX_WINDOW`.
pub fn window_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(MAX_WINDOW_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&v: &usize| v > 0)
            .unwrap_or(DEFAULT_MAX_WINDOW)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexDomain {
    #[serde(rename = "N")]
    Naturals,
    #[serde(rename = "Z")]
    Integers,
}

impl IndexDomain {
    pub fn contains(self, n: Index) -> bool {
        match self {
            IndexDomain::Naturals => n >= 0,
            IndexDomain::Integers => true,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            IndexDomain::Naturals => "N",
            IndexDomain::Integers => "Z",
        }
    }
}

impl fmt::Display for IndexDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Contiguous inclusive index range `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Index; 2]", into = "[Index; 2]")]
pub struct IndexWindow {
    lo: Index,
    hi: Index,
}

impl IndexWindow {
    pub fn new(lo: Index, hi: Index) -> Result<Self> {
        if lo > hi {
            return Err(Error::Usage(format!("window [{lo}, {hi}] has lo > hi")));
        }
        Ok(Self { lo, hi })
    }

    /// The window `[center − half, center + half]`.
    pub fn centered(center: Index, half: Index) -> Result<Self> {
        Self::new(center - half.abs(), center + half.abs())
    }

    pub fn lo(&self) -> Index {
        self.lo
    }

    pub fn hi(&self) -> Index {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: Index) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn indices(&self) -> RangeInclusive<Index> {
        self.lo..=self.hi
    }

    /// Position of `n` inside the window.
    pub fn offset(&self, n: Index) -> usize {
        debug_assert!(self.contains(n));
        (n - self.lo) as usize
    }

    /// Checks that the window lies inside `domain`.
    pub fn check_domain(&self, domain: IndexDomain) -> Result<()> {
        if domain.contains(self.lo) {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "window [{}, {}] leaves the domain {domain}",
                self.lo, self.hi
            )))
        }
    }
}

impl TryFrom<[Index; 2]> for IndexWindow {
    type Error = Error;
    fn try_from(v: [Index; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<IndexWindow> for [Index; 2] {
    fn from(w: IndexWindow) -> Self {
        [w.lo, w.hi]
    }
}

impl FromStr for IndexWindow {
    type Err = Error;

    /// Parses `lo:hi`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("window `{s}` is not of the form lo:hi")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<Index>()
                .map_err(|e| Error::Parse(format!("window bound `{t}`: {e}")))
        };
        Self::new(parse(a)?, parse(b)?).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for IndexWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// Off-diagonal modulus `|A(n,k)|` that depends only on the parity of `k − n`.
///
/// A builder attaches this when it can certify the pattern for every pair
/// `k ≠ n`; the noise summation then closes the series tail exactly instead
/// of bounding it by `|A| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityModulus {
    pub even: f64,
    pub odd: f64,
}

impl ParityModulus {
    pub const ONE: ParityModulus = ParityModulus { even: 1.0, odd: 1.0 };

    fn product(self, other: Self) -> Self {
        Self { even: self.even * other.even, odd: self.odd * other.odd }
    }
}

type EntryFn = dyn Fn(Index, Index) -> Complex64 + Send + Sync;

/// A function `(n, m) ↦ A(n, m)` with values in the closed unit disk.
#[derive(Clone)]
pub struct StructureMatrix {
    domain: IndexDomain,
    label: String,
    entry: Arc<EntryFn>,
    hermitian: bool,
    parity_modulus: Option<ParityModulus>,
}

impl StructureMatrix {
    /// Wraps an arbitrary entry function. Entries must satisfy `|A(n,m)| ≤ 1`.
    ///
    /// The result is not flagged Hermitian; use [`Self::assume_hermitian`]
    /// when the caller knows it is.
    pub fn from_fn<F>(domain: IndexDomain, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(Index, Index) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            domain,
            label: label.into(),
            entry: Arc::new(f),
            hermitian: false,
            parity_modulus: None,
        }
    }

    pub fn assume_hermitian(mut self) -> Self {
        self.hermitian = true;
        self
    }

    /// Attaches a parity modulus pattern. The caller certifies it holds for
    /// all off-diagonal pairs.
    pub fn with_parity_modulus(mut self, p: ParityModulus) -> Self {
        self.parity_modulus = Some(p);
        self
    }

    /// Drops any certified modulus pattern, forcing generic tail bounds.
    pub fn without_parity_modulus(mut self) -> Self {
        self.parity_modulus = None;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn entry(&self, n: Index, m: Index) -> Complex64 {
        (self.entry)(n, m)
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn parity_modulus(&self) -> Option<ParityModulus> {
        self.parity_modulus
    }

    /// Largest deviation of the diagonal from 1 on `w`.
    pub fn diagonal_defect(&self, w: IndexWindow) -> f64 {
        w.indices()
            .map(|n| (self.entry(n, n) - 1.0).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for StructureMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StructureMatrix")
            .field("domain", &self.domain)
            .field("label", &self.label)
            .field("hermitian", &self.hermitian)
            .field("parity_modulus", &self.parity_modulus)
            .finish_non_exhaustive()
    }
}

/// Materializes `A` on `w × w`, row-major by ascending index, under the
/// default side cap ([`window_cap`]).
pub fn truncate(a: &StructureMatrix, w: IndexWindow) -> Result<DMatrix<Complex64>> {
    truncate_with_cap(a, w, window_cap())
}

pub fn truncate_with_cap(
    a: &StructureMatrix,
    w: IndexWindow,
    cap: usize,
) -> Result<DMatrix<Complex64>> {
    w.check_domain(a.domain())?;
    let size = w.len();
    if size > cap {
        return Err(Error::Resource {
            what: "window side",
            requested: size as u64,
            cap: cap as u64,
            achievable: None,
        });
    }
    Ok(DMatrix::from_fn(size, size, |i, j| {
        a.entry(w.lo() + i as Index, w.lo() + j as Index)
    }))
}

/// Hermitian tolerance used before eigensolves.
const HERMITIAN_TOL: f64 = 1e-12;

/// PSD test on a finite section: `(smallest eigenvalue ≥ −tol, smallest eigenvalue)`.
pub fn is_psd_truncation(a: &StructureMatrix, w: IndexWindow, tol: f64) -> Result<(bool, f64)> {
    let m = truncate(a, w)?;
    let defect = linalg::hermitian_defect(&m);
    if defect > HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "section of `{}` on {w} is not Hermitian (defect {defect:e})",
            a.label()
        )));
    }
    let min = linalg::min_eigenvalue(&m);
    Ok((min >= -tol, min))
}
