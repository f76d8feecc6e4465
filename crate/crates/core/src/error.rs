use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed state pattern: {0}")]
    MalformedState(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("outside the operation's domain: {0}")]
    Domain(String),

    #[error("node budget of {budget} states exceeded")]
    BudgetExceeded { budget: usize },

    #[error("conjectured identity failed: {0}")]
    ConjectureViolation(String),

    #[error("cache entry rejected: {0}")]
    CacheCorrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
