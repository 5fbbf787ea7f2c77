use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Construction input violates a model invariant.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Malformed edge-list text; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A state space is too large to enumerate.
    #[error("state space has {size} states, exceeding the cap of {cap}")]
    CapacityExceeded { size: u128, cap: u128 },

    /// An operation was called on a value it is not defined for.
    #[error("usage error: {0}")]
    Usage(String),

    /// A numeric operation left its mathematical domain (log of zero etc.).
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
