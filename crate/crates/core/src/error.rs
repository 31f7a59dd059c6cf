use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("angle {0} outside [-1, 1]")]
    Domain(f64),

    #[error("invalid array model: {0}")]
    InvalidModel(String),

    #[error("invalid ASF: {0}")]
    InvalidAsf(String),

    #[error("covariance is not PSD: smallest eigenvalue {min_eig:e} with trace {trace:e}")]
    NotPsd { min_eig: f64, trace: f64 },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("efficiency order {q} outside [1, {m}]")]
    InvalidOrder { q: usize, m: usize },

    #[error("true covariance is zero")]
    ZeroTrueCovariance,

    #[error("linear system is ill-conditioned (condition estimate {cond:e})")]
    SingularSystem { cond: f64 },

    #[error("channel matrix is rank deficient (condition estimate {cond:e})")]
    RankDeficient { cond: f64 },

    #[error("LP relaxation failed numerically: {0}")]
    LpNumericalFailure(String),

    #[error("invalid MILP instance: {0}")]
    InvalidInstance(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, got: impl ToString) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
