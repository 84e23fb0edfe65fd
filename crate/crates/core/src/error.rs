use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {name} = {value} violates {constraint}")]
    Domain {
        name: &'static str,
        value: String,
        constraint: &'static str,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

impl Error {
    pub(crate) fn domain(
        name: &'static str,
        value: impl std::fmt::Display,
        constraint: &'static str,
    ) -> Self {
        Error::Domain {
            name,
            value: value.to_string(),
            constraint,
        }
    }
}
