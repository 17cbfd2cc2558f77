//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FplError {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A spec/config object violates its invariants.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    /// Mismatched shapes or dimensions.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A configured resource budget would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Degenerate point geometry (singular saddle system etc.).
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    /// Non-finite values or violated stability bounds during integration.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Scenario configuration problem.
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FplError>;
