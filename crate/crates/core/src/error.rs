use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: line {line}: self-loop on node {label:?}", path.display())]
    SelfLoop {
        path: PathBuf,
        line: usize,
        label: String,
    },

    #[error("{}: input contains no edges or nodes", path.display())]
    EmptyInput { path: PathBuf },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("graph has {n} nodes; at least 2 are required")]
    TooSmall { n: usize },

    #[error("unsupported density: {0}")]
    Density(String),

    #[error("dimension {n} exceeds the limit of {max} for this operation")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("order is not a permutation of 0..{n}")]
    NotPermutation { n: usize },

    #[error("invalid annealing schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{method} requires at least one edge")]
    NoEdges { method: &'static str },

    #[error("{method} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("GenBE parameter grid is empty")]
    EmptyGrid,

    #[error("unknown method {0:?}")]
    UnknownMethod(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Process exit codes used by the command-line tool.
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

impl Error {
    /// Exit code class: bad arguments, bad or unsuitable data, or a failed
    /// internal check.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidSchedule(_)
            | Error::InvalidParameter(_)
            | Error::EmptyGrid
            | Error::UnknownMethod(_) => EXIT_USAGE,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_DATA,
        }
    }
}
