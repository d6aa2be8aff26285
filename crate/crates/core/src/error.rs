use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The caller violated a documented precondition (bad argument, wrong domain).
    #[error("usage error: {0}")]
    Usage(String),

    /// Two matrices that must share an index domain do not.
    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: &'static str, right: &'static str },

    /// A computation would exceed a configured size cap.
    #[error("resource limit: {what} needs {requested}, cap is {cap}{}", achievable.map(|t| format!(" (achievable tolerance {t:e})")).unwrap_or_default())]
    Resource {
        what: &'static str,
        requested: u64,
        cap: u64,
        achievable: Option<f64>,
    },

    /// An input failed a structural check the operation relies on.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A Gram vector is not of unit length.
    #[error("vector {index} has norm {norm}, expected 1")]
    NotUnitVector { index: usize, norm: f64 },

    /// An iterative method ran out of iterations.
    #[error("no convergence after {iterations} iterations (best estimate {best})")]
    NonConvergence { best: f64, iterations: usize },

    /// Text input (interval sets, windows, configuration) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
