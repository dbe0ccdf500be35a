use std::path::PathBuf;

use acir_core::parser::LoadError;
use acir_core::{ParseError, SemanticError};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {}", .0.display(), .1)]
    Io(PathBuf, std::io::Error),
    #[error("{}:{}", .0.display(), .1)]
    Parse(PathBuf, ParseError),
    #[error("{}: {}", .0.display(), .1)]
    Invalid(PathBuf, String),
    #[error("{0}")]
    Semantic(#[from] SemanticError),
    #[error("{0}")]
    Output(String),
    #[error("{failed} of {total} sources failed validation")]
    Failed { failed: usize, total: usize, code: i32 },
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io(p, e) => CliError::Io(p, e),
            LoadError::Parse(p, e) => CliError::Parse(p, e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(..) | CliError::Parse(..) | CliError::Invalid(..) | CliError::Output(_) => 2,
            CliError::Semantic(_) => 3,
            CliError::Failed { code, .. } => *code,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        match self {
            CliError::Io(p, _) | CliError::Invalid(p, _) => v["path"] = json!(p),
            CliError::Parse(p, e) => {
                v["path"] = json!(p);
                v["line"] = json!(e.line());
                v["column"] = json!(e.column());
            }
            _ => {}
        }
        v
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(..) => "io",
            CliError::Parse(_, e) => e.kind(),
            CliError::Invalid(..) => "invalid_source",
            CliError::Semantic(SemanticError::EmergentNonDeterminism { .. }) => "emergent_nondeterminism",
            CliError::Semantic(_) => "semantic",
            CliError::Output(_) => "output",
            CliError::Failed { .. } => "validation_failed",
        }
    }
}

/// Writes a machine-readable diagnostic line to stderr.
pub fn emit(e: &CliError) {
    eprintln!("{}", e.to_json());
}

pub fn warn(kind: &str, message: &str) {
    eprintln!("{}", json!({ "warning": kind, "message": message }));
}
