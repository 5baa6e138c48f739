use thiserror::Error;

/// Errors produced by ingestion, analytics, fitting, and backtesting.
#[derive(Debug, Error)]
pub enum Error {
    /// Input that could not be decoded: bad number, bad date, missing
    /// column, malformed CSV record. `row` is the 1-based data row
    /// (0 for header-level problems).
    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },

    /// Structurally valid input that violates a domain invariant
    /// (nonpositive price, duplicate date, mismatched series, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Network or HTTP-level failure while fetching remote data.
    #[error("transport error: {0}")]
    Transport(String),

    /// A numerical routine produced a non-finite or unusable result.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(row: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            row,
            msg: msg.into(),
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
