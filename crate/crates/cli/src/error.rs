use thiserror::Error;

use crate::syntax::Diagnostic;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{diag}")]
    Parse { path: String, diag: Diagnostic },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Library(#[from] fibkit::Error),
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}
