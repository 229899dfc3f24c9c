use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} is outside the domain of the function (argument {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Requested series truncation cannot meet the tolerance.
    #[error("truncation radius {radius} gives tail bound {bound:e}, above tolerance {tolerance:e}")]
    Truncation { radius: usize, bound: f64, tolerance: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} above tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    /// The integrand does not follow the declared tail model.
    #[error("tail model rejected: {0}")]
    TailModel(String),

    #[error("zero table covers heights up to {available}, but {requested} was requested")]
    Coverage { requested: f64, available: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: ordinate {value} does not exceed the previous one ({previous})")]
    Monotonicity { line: usize, previous: f64, value: f64 },

    #[error("zero table validation failed: {0}")]
    Validation(String),

    #[error("zero table is empty")]
    EmptyTable,

    #[error("binary cache is corrupt: {0}")]
    Cache(String),

    #[error("no zero table given and ZETA_ZEROS_PATH is not set")]
    NoZeroTable,

    #[error("parameters are infeasible at this height; need log t >= {min_log_t:.6e}")]
    Infeasible { min_log_t: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
