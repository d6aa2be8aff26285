//! Noise sequences of infinite structure matrices indexed by ℕ² and ℤ², and
//! the covariant phase and box localization observables built from them.
//!
//! * [`matrices`]: structure matrices as entry oracles, Schur products, PSD checks.
//! * [`noise`]: moments, noise numbers with certified tail brackets, chessboard closed forms.
//! * [`observables`]: finite sections of `E^A(X)`, moment operators, the noise-operator diagonal.
//! * [`schur`]: operator norms, row-sum bounds, and the Schur-multiplier witnesses.

pub mod error;
pub mod linalg;
pub mod matrices;
pub mod noise;
pub mod observables;
pub mod schur;
pub mod summation;

pub use error::{Error, Result};
pub use matrices::{
    IndexDomain, IndexWindow, Index, ParityModulus, PhaseSequence, StructureMatrix,
};
pub use noise::{NoiseQuery, NoiseValue};
pub use nalgebra;
pub use num_complex::Complex64;
pub use observables::{IntervalSet, TruncatedOperator};
pub use schur::{NormEstimate, NormMethod};

