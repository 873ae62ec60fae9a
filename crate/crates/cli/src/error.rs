use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{key} must be in {range} (got `{value}`)")]
    Range { key: String, range: String, value: String },

    #[error("unknown key `{key}` (accepted keys: {accepted})")]
    UnknownKey { key: String, accepted: String },

    #[error("line {line}: expected key=value, found `{text}`")]
    Syntax { line: usize, text: String },

    #[error("expected KEY=VALUE, found `{0}`")]
    Assignment(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("could not write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Model {
        context: &'static str,
        #[source]
        source: shallowwave::Error,
    },

    #[error("audit failed: {0}")]
    Audit(String),
}

impl CliError {
    /// 1 for usage and configuration problems, 2 for precision or audit failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model {
                source: shallowwave::Error::Precision { .. },
                ..
            }
            | CliError::Audit(_) => 2,
            _ => 1,
        }
    }
}
