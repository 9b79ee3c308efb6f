use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted at {0} bits")]
    PrecisionExhausted(u32),
    #[error("undecided half-integer tie at {0} bits")]
    UndecidedTie(u32),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("no epsilon found after {0} halvings")]
    NoEpsilonFound(u32),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("margin too small: {0}")]
    MarginTooSmall(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
