use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument or parameter lies outside the admissible region.
    #[error("domain error: {0}")]
    Domain(String),

    /// A moment or expectation does not exist for the requested law.
    #[error("divergent: {0}")]
    Divergent(String),

    /// A quantity over- or underflowed so that the result is not representable.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Malformed input data (CSV, report, scenario file).
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
