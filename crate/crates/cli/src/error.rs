use std::path::PathBuf;

use qu0_core::semantics::SemError;
use qu0_core::syntax::ParseError;
use thiserror::Error;

/// Everything that ends an invocation with exit code 2. Rejections and
/// counter-models are results, not errors.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Script { line: usize, message: String },
    #[error("wff {text:?} {source}")]
    Wff { text: String, source: ParseError },
    #[error("model: {0}")]
    Model(String),
    #[error("model: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Semantics(#[from] SemError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn script(line: usize, message: impl Into<String>) -> CliError {
        CliError::Script {
            line,
            message: message.into(),
        }
    }

    /// Source line, when the error has one.
    pub fn line(&self) -> Option<usize> {
        match self {
            CliError::Script { line, .. } => Some(*line),
            _ => None,
        }
    }
}
