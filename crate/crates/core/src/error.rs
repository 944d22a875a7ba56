use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A figure of merit could not be measured on the given pattern.
    #[error("measurement error: {0}")]
    Measurement(String),

    /// The port/cell reconciliation did not yield exactly one bijection.
    #[error("port mapping error: {0}")]
    Mapping(String),

    /// A computation produced NaN or infinite values.
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
