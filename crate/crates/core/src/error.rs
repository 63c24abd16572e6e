use thiserror::Error;

/// Errors raised while building or querying monoids and the structures on top of them.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid field `{field}`: {message}")]
    InvalidField { field: String, message: String },

    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("monoid is not cancellative: {0}")]
    NotCancellative(String),

    #[error("monoid law violated: {0}")]
    LawViolated(String),

    #[error("unsupported realization: {0}")]
    Unsupported(String),

    #[error("element has no inverse: {0}")]
    NotInvertible(String),

    #[error("ideal is not prime: {0}")]
    NotPrime(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("carrier too large: {size} points (limit {limit})")]
    CarrierTooLarge { size: usize, limit: usize },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidField {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn from_json(err: &serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
