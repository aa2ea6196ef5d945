//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation contract (dimension mismatch, bad range).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A model or terrace specification is inconsistent.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// Unknown preset name.
    #[error("unknown preset `{0}`; known presets: {1}")]
    CatalogMiss(String, String),

    /// An analysis could not produce a result (no pinched root, no bracket, ...).
    #[error("analysis failure: {0}")]
    AnalysisFailure(String),

    /// Newton or a shooting procedure failed to converge.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A classification or root-tracking result is ambiguous.
    #[error("indeterminate: {0}")]
    Indeterminate(String),

    /// Time integration produced non-finite values.
    #[error("blow-up detected at t = {t}")]
    BlowUp { t: f64 },

    /// Configuration file problems: named key plus accepted range/suggestion.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: config errors 2, numerical failures 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::CatalogMiss(..) | Error::InvalidSpec(_) => 2,
            Error::Io(_) | Error::Json(_) => 2,
            _ => 3,
        }
    }
}
