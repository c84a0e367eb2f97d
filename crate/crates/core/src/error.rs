use thiserror::Error;

/// Library-wide error type. Construction errors are raised eagerly by the
/// validating constructors; decode and KEM failures are reported, never
/// panicked.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("modulus must be irreducible of degree {expected} over F_{p}")]
    BadModulus { p: u64, expected: usize },
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("empty input list")]
    EmptyInput,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("element is not normal")]
    NotNormal,
    #[error("element is not primitive")]
    NotPrimitive,
    #[error("points are not P-independent")]
    NotPIndependent,
    #[error("polynomial is not invariant")]
    NotInvariant,
    #[error("polynomials are not coprime")]
    NotCoprime,
    #[error("no admissible (m, delta) parameters for this (n, t, p, d)")]
    NoAdmissibleParameters,
    #[error("key generation failed after {0} retries")]
    KeygenRetriesExceeded(u32),
    #[error("undecodable: {0}")]
    Undecodable(String),
    #[error("invalid cryptogram: {0}")]
    InvalidCryptogram(String),
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
