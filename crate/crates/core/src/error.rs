use thiserror::Error;

use crate::counts::Params;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation (e.g. `ln 0`).
    #[error("{op}: {reason}")]
    Domain {
        op: &'static str,
        reason: &'static str,
    },

    /// Theta is undefined for these parameters (U = {0} or q < 3).
    #[error("degenerate parameters {params}: {reason}")]
    Degenerate { params: Params, reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Brute-force enumeration would exceed the configured resource cap.
    #[error("{what} needs {needed}, above the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },

    #[error("search grid is empty")]
    EmptyGrid,

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
