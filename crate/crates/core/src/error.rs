use thiserror::Error;

/// Errors raised by the library.
///
/// `Budget` is kept distinct from the other variants: callers (the CLI in
/// particular) report it as a refusal rather than a usage error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid log base {0}: must be finite and greater than 1")]
    InvalidBase(f64),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    #[error("ambient group mismatch: {0} vs {1}")]
    AmbientMismatch(String, String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("malformed cache file: {0}")]
    Cache(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
