//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("singular constant term: {0}")]
    Singular(String),
    #[error("degenerate matrix: {0}")]
    Degenerate(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("internal oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
