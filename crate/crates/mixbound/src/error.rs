use std::path::PathBuf;

use mixbound_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config line {line}, field `{field}`: {message}")]
    Config {
        line: usize,
        field: String,
        message: String,
    },
    #[error("config: missing field `{field}` in [{section}]")]
    MissingField { section: String, field: String },
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: CoreError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("fit: {0}")]
    Fit(String),
    #[error("report: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Usage or configuration problems, as opposed to run failures.
    pub fn is_config(&self) -> bool {
        matches!(self, HarnessError::Config { .. } | HarnessError::MissingField { .. })
    }

    pub(crate) fn core(context: impl Into<String>, source: CoreError) -> Self {
        HarnessError::Core {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
