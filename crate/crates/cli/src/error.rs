// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invariant violation at {path}: {message}")]
    Invariant { path: String, message: String },

    /// The input is well-formed but leaves nothing to analyze.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("analysis failed: {0}")]
    Analysis(#[from] ctxprob::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl IngestError {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        IngestError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invariant(path: impl Into<String>, err: impl ToString) -> Self {
        IngestError::Invariant {
            path: path.into(),
            message: err.to_string(),
        }
    }

    /// `2` for input and schema problems, `3` for data that cannot be analyzed.
    pub fn exit_code(&self) -> i32 {
        match self {
            IngestError::DegenerateData(_) | IngestError::Analysis(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = IngestError> = std::result::Result<T, E>;
