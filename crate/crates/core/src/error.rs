//! Library-wide error type.

use thiserror::Error;

/// Errors raised by state/gate constructors, propagators and schedule handling.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates an operation precondition (non-finite angle,
    /// negative duration, non-normalized state, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration refuses to produce silently-wrong results
    /// (integrator step too coarse, missing lookup table, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A pulse schedule violates a structural invariant.
    #[error("invalid schedule: {0}")]
    Schedule(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn schedule(msg: impl Into<String>) -> Self {
        Error::Schedule(msg.into())
    }
}
