use thiserror::Error;

/// Errors produced by the calculus engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched dimensions or non-square matrices.
    #[error("shape error: {0}")]
    Shape(String),

    /// The request is valid but not supported by the implemented families.
    #[error("capability error: {0}")]
    Capability(String),

    /// A numerical budget was exhausted before reaching the target accuracy.
    #[error("accuracy error: {message} (residual estimate {residual:.3e})")]
    Accuracy { message: String, residual: f64 },

    /// Malformed configuration document or command line.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }
    pub fn accuracy(msg: impl Into<String>, residual: f64) -> Self {
        Error::Accuracy {
            message: msg.into(),
            residual,
        }
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
