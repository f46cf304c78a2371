use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The structure is not well formed (missing bounds, broken complement).
    #[error("malformed structure: {0}")]
    Structural(String),

    /// A query referenced something outside the structure.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured resource cap was exceeded.
    #[error("{what} cap of {cap} exceeded ({reached} reached)")]
    Resource {
        what: &'static str,
        cap: usize,
        reached: usize,
    },

    #[error("invalid box specification: {0}")]
    InvalidSpec(String),

    /// A probability table failed normalization or the no-signaling equalities.
    #[error("no-signaling violation: {0}")]
    NoSignaling(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Violated internal invariant; indicates a bug rather than bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
