use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejected input: bad parameters, malformed records, inconsistent flags.
    #[error("validation error: {0}")]
    Validation(String),

    /// A record-level ingestion failure. `record` is 1-based over data records.
    #[error("{message} at record {record} (line {line})")]
    Record {
        record: usize,
        line: usize,
        message: String,
    },

    /// A statistic that has no value for the given input, e.g. R² of a constant vector.
    #[error("undefined: {0}")]
    Undefined(String),

    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors caused by the caller's input rather than by the program.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Validation(_)
            | Error::Record { .. }
            | Error::Undefined(_)
            | Error::Json(_)
            | Error::Csv(_)
            | Error::Io(_) => true,
            Error::Fold { source, .. } => source.is_input_error(),
            Error::Internal(_) => false,
        }
    }
}
