use thiserror::Error;

use crate::potential::ExistenceClass;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no standing wave at this parameter point ({0:?})")]
    NotExists(ExistenceClass),

    #[error("parameter t = {t} is outside the admissible interval for {case}")]
    Inadmissible { t: f64, case: &'static str },

    #[error("the non-existence curve is empty for {0}")]
    EmptyCurve(&'static str),

    #[error("quadrature did not converge: value {partial}, estimated error {est_error}")]
    QuadratureNonConvergent { partial: f64, est_error: f64 },

    #[error("no sign change of J in column omega = {omega}")]
    NoSignChange { omega: f64 },

    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        /// Residual history, one entry per iteration.
        trace: Vec<f64>,
        /// Best iterate found, if the caller wants to inspect it.
        best: Vec<f64>,
    },

    #[error("linear operator is numerically singular")]
    SingularLinearOperator,

    #[error("i/o: {0}")]
    Io(String),

    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
