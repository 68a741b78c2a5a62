use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("locality violation: {left} and {right} are not independent")]
    LocalityViolation { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at evaluation point: {0}")]
    PoleAtPoint(String),
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),
    #[error("inadmissible order: {0}")]
    InadmissibleOrder(String),
    #[error("inner product is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("duplicate label {0}")]
    DuplicateLabel(u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("accuracy budget not met: {0}")]
    NonConvergent(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}
