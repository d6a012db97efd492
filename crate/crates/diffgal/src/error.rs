//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero {0}")]
    DivisionByZero(&'static str),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("prime collision: exponent difference vanishes mod {prime}; retry with another prime")]
    PrimeCollision { prime: u64 },
    #[error("insufficient series truncation: need at least {needed} terms, have {have}")]
    InsufficientTruncation { needed: usize, have: usize },
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
