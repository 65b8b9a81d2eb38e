use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit codes: `Parse` and `Domain` are input
/// problems, `Contract` is a violated precondition, `Unsupported` is a
/// configured limit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
