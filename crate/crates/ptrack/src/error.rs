//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PtrackError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} outside domain ({lo}, {hi}) of pressure law `{label}`")]
    Domain {
        label: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{quantity} = {value} outside achievable range [{lo}, {hi}]")]
    Range {
        quantity: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("numerical failure in {context}: achieved error {achieved:e}, requested {requested:e}")]
    NumericalFailure {
        context: String,
        achieved: f64,
        requested: f64,
    },

    #[error("wave-curve branch mismatch: {0}")]
    BranchMismatch(String),

    #[error("states are not on the named curve: {0}")]
    OffCurve(String),

    #[error("entropy condition violated: {0}")]
    Entropy(String),

    #[error("no intersection of wave curves within the domain: {0}")]
    DomainExhausted(String),

    #[error("inconsistent interaction topology: {0}")]
    Topology(String),

    #[error("lemma precondition violated: {0}")]
    LemmaPrecondition(String),

    #[error("pattern construction failed: {0}")]
    Construction(String),

    #[error("wave-train seeding failed: {0}")]
    Seeding(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, PtrackError>;
