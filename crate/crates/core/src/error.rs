use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter point outside an operation's stated domain.
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("OEIS query needs at least {min} terms, got {got}")]
    TooFewTerms { min: usize, got: usize },

    #[error("transport error: {0}")]
    Transport(String),

    /// The service answered, but not with anything we understand. `raw`
    /// keeps the payload for diagnosis.
    #[error("malformed response: {message}")]
    MalformedResponse { message: String, raw: String },

    #[error("network access disabled (offline mode)")]
    Offline,

    #[error("cache I/O at {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
