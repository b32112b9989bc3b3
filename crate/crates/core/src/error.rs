use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { line: usize, value: f64 },

    #[error("line {line}: duplicate arc {src} -> {dst}")]
    DuplicateArc { line: usize, src: String, dst: String },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: String },

    #[error("line {line}: arc has no probability and no default was given")]
    MissingProbability { line: usize },

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid propagation log: {0}")]
    InvalidLog(String),

    #[error("linear threshold weights into node {node} sum to {sum} > 1")]
    LtWeightsExceeded { node: u32, sum: f64 },

    #[error("instance too large for exact enumeration: {what} is {size}, cap {cap}")]
    EnumerationCapExceeded { what: &'static str, size: usize, cap: usize },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("{0} is unimplemented")]
    Unimplemented(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// True for errors caused by the file system rather than by the input data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
