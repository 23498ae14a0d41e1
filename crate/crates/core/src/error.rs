use thiserror::Error;

/// Errors produced anywhere in the lab.
#[derive(Debug, Error)]
pub enum Error {
    /// Two bit-vectors (or a vector and a block length) disagree in size.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A code could not be built from the supplied parameters.
    #[error("cannot construct code: {0}")]
    Construction(String),

    /// A strategy, decoder, or experiment was configured inconsistently.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An adversary broke the one-bit-in, one-bit-out contract.
    #[error("protocol violation: {0}")]
    Protocol(String),

    /// Exhaustive enumeration would exceed the state-space guard.
    #[error("enumeration guard exceeded: {states} states > {limit}; use Monte Carlo instead")]
    Capacity { states: u128, limit: u128 },

    /// A numeric argument fell outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A probability vector or distribution failed validation.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A bound was requested outside the regime where it applies.
    #[error("bound not applicable: {0}")]
    Regime(String),

    /// Malformed text input (code files, tokens, bitstrings).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
