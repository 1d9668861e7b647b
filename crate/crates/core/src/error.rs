use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied arguments outside an operation's contract.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An invariant that holds in exact arithmetic was violated at runtime.
    #[error("internal consistency fault: {0}")]
    Consistency(String),

    #[error("enumeration needs {needed} predicate evaluations, cap is {cap}")]
    EnumerationCap { needed: u128, cap: u64 },

    /// A sweep stopped early; `written` records were emitted before it did.
    #[error("stopped after {written} records: {source}")]
    Interrupted { written: u64, source: Box<Error> },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
