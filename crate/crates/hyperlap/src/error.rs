use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} = {got} exceeds the supported maximum {max}")]
    Capacity { what: &'static str, got: usize, max: usize },

    #[error("diffusion diverged at step {step} (t = {time})")]
    Divergence { step: usize, time: f64 },

    #[error("solver did not converge: {msg} (constraint residual {residual:.3e})")]
    Convergence { msg: String, residual: f64 },

    #[error("stochastic procedure failed after {rounds} rounds: {msg}")]
    StochasticFailure { rounds: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
