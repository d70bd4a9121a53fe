use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Query outside a precomputed table or a data range.
    #[error("range error: {0}")]
    Range(String),
    #[error("pole: {0}")]
    Pole(String),
    /// Evaluation too close to a zero of zeta where a logarithm is required.
    #[error("singularity: {0}")]
    Singularity(String),
    /// Work or memory would exceed the configured envelope.
    #[error("resource envelope exceeded: {0}")]
    Resource(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Range(_) => "range",
            Error::Pole(_) => "pole",
            Error::Singularity(_) => "singularity",
            Error::Resource(_) => "resource",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! range {
    ($($arg:tt)*) => { $crate::error::Error::Range(format!($($arg)*)) };
}
macro_rules! resource {
    ($($arg:tt)*) => { $crate::error::Error::Resource(format!($($arg)*)) };
}
pub(crate) use {domain, range, resource};
