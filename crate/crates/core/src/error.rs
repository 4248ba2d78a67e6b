use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid market parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("cannot parse interval set `{input}`: {reason}")]
    SetSyntax { input: String, reason: String },

    #[error("map is not strictly monotone: {0}")]
    NonMonotoneMap(String),

    #[error("claim has zero initial price; the beat ratio is undefined")]
    ZeroPriceClaim,

    #[error("path {path_index} (seed {seed}, stream {stream}) failed: {source}")]
    PathFailed {
        path_index: u64,
        seed: u64,
        stream: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("return series: {0}")]
    Series(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
