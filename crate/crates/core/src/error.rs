//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("malformed matching: {0}")]
    Matching(String),
    #[error("degenerate arc diagram: closed components through pairs {0:?}")]
    Degenerate(Vec<Vec<usize>>),
    #[error("ambient mismatch: {0}")]
    Ambient(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("structural inconsistency: {0}")]
    Structure(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}
