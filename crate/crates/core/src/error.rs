use thiserror::Error;

/// Errors raised by the exact evaluators, operator builders and verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RacahError {
    /// A denominator, bottom Pochhammer factor or Gamma argument vanished.
    #[error("pole: {0} vanishes")]
    Pole(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    Range(String),
    /// A shift left the simplex with a nonzero coefficient.
    #[error("boundary violation: {0}")]
    Boundary(String),
    #[error("non-generic parameters: {0}")]
    Genericity(String),
    /// A weight took a nonpositive value, so its square root is not real.
    #[error("sign error: {0}")]
    Sign(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("spectrum mismatch: {0}")]
    SpectrumMismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = RacahError> = std::result::Result<T, E>;
