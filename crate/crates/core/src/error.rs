use nalgebra::DVector;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("chain diverged at step {step}: non-finite drift at state {state:?}")]
    DivergedChain { step: usize, state: DVector<f64> },

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("step size h = {h} exceeds the admissible ceiling {h_max} (binding term: {binding})")]
    ConstraintViolation {
        h: f64,
        h_max: f64,
        binding: &'static str,
    },

    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    #[error("insufficient domain: stationary-weighted proposal mass leaking off the grid is {leak:.3e}")]
    InsufficientDomain { leak: f64 },

    #[error("reducible chain: {count} eigenvalues within tolerance of 1")]
    Reducible { count: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("config error at key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
