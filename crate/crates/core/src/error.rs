use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain where the formula is valid.
    #[error("domain error: {0}")]
    Domain(String),
    /// Pre- or post-condition of an operation was violated.
    #[error("contract violation: {0}")]
    Contract(String),
    /// Evaluation point coincides with a source or element.
    #[error("singularity: {0}")]
    Singularity(String),
    /// Invalid experiment or estimator configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}

pub(crate) fn singular<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Singularity(msg.into()))
}
