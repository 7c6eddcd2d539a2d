use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),

    #[error("precision mismatch: {0}")]
    Mismatch(String),

    #[error("element is not a unit")]
    NotUnit,

    #[error("inexact division by pi^{shift}: valuation is only {val}")]
    InexactDivision { shift: u32, val: u32 },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("hypothesis e >= n fails: ramification index {e} is smaller than {n}")]
    NotClose { e: u32, n: u32 },

    #[error("ghost congruence fails at stage {stage}")]
    GhostCongruence { stage: usize },

    #[error("integrality failure: {0}")]
    Integrality(String),

    #[error("resource budget exceeded: {what} needs {needed} elements (budget {budget})")]
    Budget {
        what: String,
        needed: u64,
        budget: u64,
    },

    #[error("invalid family data: {0}")]
    Family(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
