use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or config field is outside its documented range.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("singularity at x = {x}: within machine epsilon of the critical set")]
    Singularity { x: f64 },

    /// A requested budget exceeds a documented ceiling or is too small.
    #[error("budget error: {0}")]
    Budget(String),

    /// Inputs violate an operation's contract (grid mismatch and the like).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported for this family: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
