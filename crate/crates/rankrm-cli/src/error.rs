use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Decoding(String),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Decoding(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Io { .. } | CliError::Invalid(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// A parse error located in `path`.
    pub fn parse_in(path: &std::path::Path, msg: impl std::fmt::Display) -> CliError {
        CliError::Parse(format!("{}: {msg}", path.display()))
    }

    pub fn invalid(msg: impl std::fmt::Display) -> CliError {
        CliError::Invalid(msg.to_string())
    }
}
