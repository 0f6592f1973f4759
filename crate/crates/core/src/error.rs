use thiserror::Error;

use crate::numeric::root::RootError;

/// Errors raised by the loan model and the optimizers built on top of it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid loan terms: {0}")]
    InvalidTerms(String),

    #[error("invalid payment bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("strategy is not admissible on ({start}, {end}]: {detail}")]
    Inadmissible { start: f64, end: f64, detail: String },

    #[error("{what} is out of domain: {detail}")]
    OutOfDomain { what: &'static str, detail: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error(transparent)]
    Root(#[from] RootError),
}

impl ModelError {
    pub(crate) fn out_of_domain(what: &'static str, detail: impl Into<String>) -> Self {
        ModelError::OutOfDomain {
            what,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
