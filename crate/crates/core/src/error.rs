use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("lookup error: {0}")]
    Lookup(String),

    #[error("integration failed at t = {t} µs (step {step:e}): {reason}")]
    Integration { t: f64, step: f64, reason: String },

    #[error("optimization failed: {0}")]
    Optimization(String),

    #[error("velocity grid not converged: weight mass {mass} < {required}")]
    Convergence { mass: f64, required: f64 },

    #[error("phase extraction failed: {0}")]
    Extraction(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
