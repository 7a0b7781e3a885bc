use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A size or work limit was hit. `partial` carries how far the
    /// computation got when that is meaningful.
    #[error("capacity exceeded: {what} (limit {limit}{})", partial.map(|p| format!(", reached {p}")).unwrap_or_default())]
    Capacity {
        what: String,
        limit: u128,
        partial: Option<u128>,
    },

    /// The caller violated an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed family input (duplicates, out-of-range elements, wrong uniformity).
    #[error("invalid family: {0}")]
    InvalidFamily(String),

    /// An internal cross-check failed. This is always an implementation bug.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    /// A checked inequality or structural claim failed on a concrete
    /// instance while every internal cross-check passed.
    #[error("COUNTEREXAMPLE: {0}")]
    Counterexample(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn capacity(what: impl Into<String>, limit: u128, partial: Option<u128>) -> Self {
        Error::Capacity {
            what: what.into(),
            limit,
            partial,
        }
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
