use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad class of a failure, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input data: datasets, reference files, problem definitions.
    Data,
    /// A solver could not produce a result.
    Solver,
    /// Unknown names or malformed parameters.
    Usage,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Sizing { expected: usize, got: usize },

    #[error("invalid spin value {value} at index {index}; spins must be -1 or +1")]
    InvalidSpin { index: usize, value: i64 },

    #[error("invalid test suite: {0}")]
    InvalidSuite(String),

    #[error("invalid Ising model: {0}")]
    InvalidModel(String),

    #[error("invalid problem specification: {0}")]
    InvalidSpec(String),

    #[error("attribute `{0}` is not present in the test suite")]
    MissingAttribute(String),

    #[error(
        "attribute `{0}` sums to zero over the suite; ratio and normalization terms are undefined"
    )]
    ZeroAttributeSum(String),

    #[error("unknown {what} `{name}`; available: {}", available.join(", "))]
    UnknownName {
        what: &'static str,
        name: String,
        available: Vec<String>,
    },

    #[error("{what} `{name}` is already registered")]
    DuplicateRegistration { what: &'static str, name: String },

    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("brute force refused: n = {n} exceeds the limit of {limit} spins")]
    SizeLimit { n: usize, limit: usize },

    #[error(
        "numeric instability in batch {batch} at step {step}, oscillator {oscillator}: {detail}"
    )]
    NumericInstability {
        batch: usize,
        step: usize,
        oscillator: usize,
        detail: String,
    },

    #[error("cannot summarize an empty sample ({0})")]
    EmptySample(String),

    #[error("objective evaluation failed: {0}")]
    Evaluation(String),

    #[error("{path}: row {row}, column {column}: {message}")]
    Csv {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: schema violation at `{pointer}`: {message}")]
    Schema {
        path: PathBuf,
        pointer: String,
        message: String,
    },

    #[error("dataset `{name}` not found; searched: {}", searched.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", "))]
    DatasetNotFound {
        name: String,
        searched: Vec<PathBuf>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SizeLimit { .. } | Error::NumericInstability { .. } | Error::Evaluation(_) => {
                ErrorKind::Solver
            }
            Error::UnknownName { .. }
            | Error::DuplicateRegistration { .. }
            | Error::InvalidParameter { .. } => ErrorKind::Usage,
            _ => ErrorKind::Data,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
