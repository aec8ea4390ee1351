use num_bigint::BigUint;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside an operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value that must be prime is not.
    #[error("not prime: {0}")]
    NotPrime(BigUint),

    /// A denominator shares a factor with the modulus and cannot be inverted.
    #[error("denominator not invertible modulo powers of {prime}")]
    DenominatorNotInvertible { prime: BigUint },

    /// A documented mathematical precondition does not hold for the inputs.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The requested congruence has no solution.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// The operation is not defined for this input (notably p = 2).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The factorization budget ran out; the unfactored cofactor is reported.
    #[error("factorization budget exhausted; unfactored cofactor {cofactor}")]
    FactorizationLimit { cofactor: BigUint },

    /// A string did not parse as the expected value.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An internal invariant failed; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

// Serializing our own report types can only fail on a bug, never on input.
impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Internal(format!("json serialization: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
