use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source_name}{}: {message}", line.map(|l| format!(": line {l}")).unwrap_or_default())]
    Input {
        source_name: String,
        line: Option<u64>,
        message: String,
    },
    #[error("config error: `{key}`: {message}")]
    Config { key: String, message: String },
    #[error(transparent)]
    Analysis(#[from] pettitt_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub const EXIT_INPUT: u8 = 3;
    pub const EXIT_CONFIG: u8 = 4;
    pub const EXIT_DATA: u8 = 5;
    pub const EXIT_IO: u8 = 1;

    pub fn input(source_name: impl Into<String>, line: Option<u64>, message: impl Into<String>) -> Self {
        CliError::Input {
            source_name: source_name.into(),
            line,
            message: message.into(),
        }
    }

    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } => Self::EXIT_INPUT,
            CliError::Config { .. } => Self::EXIT_CONFIG,
            CliError::Analysis(_) => Self::EXIT_DATA,
            CliError::Io { .. } => Self::EXIT_IO,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
