use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input is well-formed but violates a mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invariant factors were given out of divisibility order.
    #[error("non-canonical chain: {found:?} is not a divisibility chain of factors >= 2 (use --canonicalize)")]
    NonCanonicalChain { found: Vec<u64> },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// An exhaustive enumeration would exceed its configured cap.
    #[error("capacity exceeded: {what} would exceed cap {cap}")]
    Capacity { what: &'static str, cap: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
