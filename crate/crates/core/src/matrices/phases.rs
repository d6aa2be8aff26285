use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use super::{Index, IndexWindow, StructureMatrix};

/// Real phases `ν_n` indexed by ℤ (or ℕ).
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSequence {
    /// `ν_n = slope·n + intercept`.
    Linear { slope: f64, intercept: f64 },
    /// `ν_n = values[(n − start) mod len]`.
    Cyclic { start: Index, values: Arc<[f64]> },
    /// Pseudo-random phases in `[0, 2π)`, one per index.
    Seeded { seed: u64 },
}

impl PhaseSequence {
    pub fn linear(slope: f64) -> Self {
        PhaseSequence::Linear { slope, intercept: 0.0 }
    }

    pub fn cyclic(values: Vec<f64>) -> Self {
        PhaseSequence::Cyclic { start: 0, values: values.into() }
    }

    pub fn seeded(seed: u64) -> Self {
        PhaseSequence::Seeded { seed }
    }

    pub fn value(&self, n: Index) -> f64 {
        match self {
            PhaseSequence::Linear { slope, intercept } => slope * n as f64 + intercept,
            PhaseSequence::Cyclic { start, values } => {
                if values.is_empty() {
                    0.0
                } else {
                    values[(n - start).rem_euclid(values.len() as Index) as usize]
                }
            }
            PhaseSequence::Seeded { seed } => {
                let bits = super::builders::random_bits(*seed, n);
                (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * TAU
            }
        }
    }

    pub(crate) fn describe(&self) -> String {
        match self {
            PhaseSequence::Linear { slope, intercept } => format!("linear {slope}n+{intercept}"),
            PhaseSequence::Cyclic { values, .. } => format!("cyclic, {} values", values.len()),
            PhaseSequence::Seeded { seed } => format!("seeded {seed}"),
        }
    }
}

/// Why a window section is not of the form `exp(i(ν_n − ν_m))`.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseRecoveryFailure {
    NotNormalized { n: Index, value: f64 },
    Modulus { n: Index, m: Index, modulus: f64 },
    Cocycle { n: Index, m: Index, k: Index, defect: f64 },
}

impl fmt::Display for PhaseRecoveryFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseRecoveryFailure::NotNormalized { n, value } => {
                write!(f, "diagonal entry ({n},{n}) is {value}, not 1")
            }
            PhaseRecoveryFailure::Modulus { n, m, modulus } => {
                write!(f, "|A({n},{m})| = {modulus} is not 1")
            }
            PhaseRecoveryFailure::Cocycle { n, m, k, defect } => {
                write!(f, "|A({n},{m})A({m},{k}) − A({n},{k})| = {defect:e}")
            }
        }
    }
}

/// Recovers `ν` with `ν(lo) = 0` and `ν(n) = arg A(n, lo)` from a torus-valued
/// section, or names the first violated pair or triple.
///
/// The returned sequence is defined on the window and repeats cyclically
/// outside it.
pub fn torus_phase_recovery(
    a: &StructureMatrix,
    w: IndexWindow,
    tol: f64,
) -> Result<PhaseSequence, PhaseRecoveryFailure> {
    let size = w.len();
    let lo = w.lo();
    let mut section = Vec::with_capacity(size * size);
    for n in w.indices() {
        for m in w.indices() {
            section.push(a.entry(n, m));
        }
    }
    let at = |n: Index, m: Index| section[w.offset(n) * size + w.offset(m)];

    for n in w.indices() {
        let d = (at(n, n) - 1.0).norm();
        if d > tol {
            return Err(PhaseRecoveryFailure::NotNormalized { n, value: at(n, n).re });
        }
    }
    for n in w.indices() {
        for m in w.indices() {
            let r = at(n, m).norm();
            if (r - 1.0).abs() > tol {
                return Err(PhaseRecoveryFailure::Modulus { n, m, modulus: r });
            }
        }
    }
    for n in w.indices() {
        for m in w.indices() {
            let nm = at(n, m);
            for k in w.indices() {
                let defect = (nm * at(m, k) - at(n, k)).norm();
                if defect > tol {
                    return Err(PhaseRecoveryFailure::Cocycle { n, m, k, defect });
                }
            }
        }
    }
    let values: Vec<f64> = w.indices().map(|n| at(n, lo).arg()).collect();
    Ok(PhaseSequence::Cyclic { start: lo, values: values.into() })
}
