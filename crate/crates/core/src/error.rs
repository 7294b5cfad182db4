use thiserror::Error;

/// Errors raised by the core crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two fields or trajectories live on different grids, or a shape is wrong.
    #[error("structural error: {0}")]
    Structure(String),
    /// An operator was applied outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A run or estimator was configured with invalid parameters.
    #[error("configuration error: {0}")]
    Config(String),
    /// The solution exceeded the blow-up threshold.
    #[error("solver diverged at t = {time}: max|u| = {max_abs}")]
    Divergence { time: f64, max_abs: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structure(msg: impl Into<String>) -> Error {
    Error::Structure(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
