use thiserror::Error;

/// Errors raised by the computational core.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input violates a mathematical precondition (zero where nonzero is required, etc).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
    /// A computation would exceed a configured resource limit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Unsuitable configuration, e.g. a prime that does not fit the data.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A rational part could not be completely factored.
    #[error("factorization error: {0}")]
    Factorization(String),
    /// Precision insufficient to certify a numerical comparison.
    #[error("precision error: {0}")]
    Precision(String),
    /// Problem file does not match its schema.
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("io error: {0}")]
    Io(String),
    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{context}: {source}")]
    Context { context: String, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context { context: context.into(), source: Box::new(self) }
    }
}
