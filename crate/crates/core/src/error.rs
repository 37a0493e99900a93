use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Argument outside the domain of a function (e.g. `log_gamma(0)`).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("n = {n} exceeds the configured row cap of {cap}")]
    RowCapExceeded { n: usize, cap: usize },

    #[error("cannot parse theta {0:?}: expected a positive decimal or p/q")]
    ThetaParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
