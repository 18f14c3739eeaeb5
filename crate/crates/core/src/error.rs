use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by graph construction, dynamics and scenario runs.
#[derive(Debug, Error)]
pub enum QlError {
    /// An argument is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An input violates a structural contract (dimension, Hermiticity, labels).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A scenario configuration field is invalid.
    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// Integration produced non-finite values.
    #[error("numeric divergence at step {step}{}", realization.map(|r| format!(" (realization {r})")).unwrap_or_default())]
    Divergence {
        step: usize,
        realization: Option<usize>,
    },

    /// A numeric routine failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl QlError {
    pub(crate) fn config(field: &str, reason: impl Into<String>) -> Self {
        QlError::Config {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        QlError::Io {
            path: path.into(),
            source,
        }
    }

    /// Attach a realization index to a divergence error.
    pub fn in_realization(self, index: usize) -> Self {
        match self {
            QlError::Divergence { step, .. } => QlError::Divergence {
                step,
                realization: Some(index),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, QlError>;
