use thiserror::Error;

/// Errors raised by the symbolic and numerical engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("series truncated: requested exponent {requested}, trusted below {available}")]
    Truncation { requested: String, available: String },

    #[error("invalid gaps (q={q}, r={r}): {reason}")]
    InvalidGaps { q: i64, r: i64, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rational reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("point {0} is within the near-pole tolerance of a lattice point")]
    NearPole(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64, trace: Vec<f64> },

    #[error("integration path error: {0}")]
    Path(String),

    #[error("non-polynomial coefficient: {0}")]
    NonPolynomial(String),
}

pub type Result<T> = std::result::Result<T, Error>;
