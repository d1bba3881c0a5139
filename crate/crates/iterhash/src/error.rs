//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two elements from different algebraic structures were combined.
    #[error("mismatched algebras: {left} vs {right}")]
    AlgebraMismatch { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    /// Multiplicative inverses only exist in fields.
    #[error("{0} is not a field")]
    NotAField(String),

    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested computation exceeds the enumeration budget or an
    /// implementation limit.
    #[error("capacity exceeded: {what} needs {needed}, limit {limit}")]
    Capacity {
        what: String,
        needed: u128,
        limit: u128,
    },

    /// A spec string, input string or rational could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn capacity(what: impl Into<String>, needed: u128, limit: u128) -> Self {
        Error::Capacity {
            what: what.into(),
            needed,
            limit,
        }
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 2,
            Error::Parse(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
