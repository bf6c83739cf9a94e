use thiserror::Error;

use crate::classgroup::AbelianGroupStructure;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation (zero, non-squarefree,
    /// degenerate field, unmet precondition).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured budget was exhausted before the computation finished.
    #[error("resource error: {msg}")]
    Resource {
        msg: String,
        /// Best upper bound known when the budget ran out (class-group runs only).
        partial: Option<AbelianGroupStructure>,
    },

    /// Required cached data is missing (for instance `Cl(K)` was never computed).
    #[error("state error: {0}")]
    State(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("fixture error: {0}")]
    Fixture(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource {
            msg: msg.into(),
            partial: None,
        }
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
