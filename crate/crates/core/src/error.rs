use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced anywhere in the harness.
///
/// Each variant maps onto one of the CLI exit categories through
/// [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient data: need at least {needed} observations, {available} available")]
    InsufficientData { needed: usize, available: usize },

    #[error("invalid data: {0}")]
    Validation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("no lines matched the step pattern")]
    EmptyExtraction,

    #[error("no steps remain after trimming {warmup} warmup steps")]
    EmptyResult { warmup: u64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")]
    Convergence { a: f64, b: f64, x: f64 },

    #[error("both samples have zero variance; the variance ratio is undefined")]
    DegenerateVariance,

    #[error("infeasible placement: {0}")]
    Feasibility(String),

    #[error("sweep plan is empty after feasibility filtering; rejected: {}", rejected.join("; "))]
    Planning { rejected: Vec<String> },

    #[error("command template error: {0}")]
    Template(String),

    #[error("step windows differ: {0}")]
    Alignment(String),

    #[error("lookup failed: {0}")]
    Lookup(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error: 4 for numerical failures, 2 for
    /// everything caused by the inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence { .. } | Error::Domain(_) => 4,
            _ => 2,
        }
    }
}
