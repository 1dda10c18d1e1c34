use thiserror::Error;

/// Errors raised by the library.
///
/// Mathematical verdicts (a failed bound, a failed criterion) are never errors;
/// they are recorded in the corresponding report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational {0:?}: expected \"p/q\" or \"p\" with integer p and positive q")]
    Parse(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("table too large: {0}")]
    TooLarge(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
