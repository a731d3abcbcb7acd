use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("input error: {0}")]
    Input(String),
    /// An operation was asked of a position it cannot act on (e.g. a finished game).
    #[error("state error: {0}")]
    State(String),
    /// The search exceeded its node budget; the result is unknown, never guessed.
    #[error("resource error: node limit of {limit} exceeded")]
    NodeLimit { limit: u64 },
    /// Something that the theory rules out was observed.
    #[error("inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
