//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside the operation's domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A precondition on the input data does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// The resampling engine ran out of budget before clearing all events.
    #[error("resampling budget exhausted after {resamples} resamples")]
    ResampleBudget { resamples: usize },

    /// A retryable randomized step ran out of budget.
    #[error("retry budget exhausted: {0}")]
    RetryExhausted(String),

    /// A feasibility check failed; the message carries the witness summary.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The nibble process violated a monitored invariant on every retry.
    #[error("nibble retry budget exhausted after {retries} retries in round {round}")]
    NibbleExhausted {
        round: usize,
        retries: usize,
        trajectory: Vec<crate::nibble::RoundStats>,
    },

    /// An internal invariant failed; this is a bug, not a user error.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
