use thiserror::Error;

/// Errors raised by game construction, solving, learning and verification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-domain input.
    #[error("invalid input: {0}")]
    Input(String),

    /// A game or certificate document failed to parse or validate.
    #[error("{path}: {reason}")]
    Parse { path: String, reason: String },

    /// The request exceeds an explicit capability boundary (enumeration caps,
    /// grid resolution caps, nonlinear summarization for the learner).
    #[error("capability limit: {0}")]
    Capability(String),

    /// An internal invariant failed, which means the declared influence or
    /// derivative bounds do not match the game.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}
