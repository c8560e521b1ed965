use std::path::PathBuf;

use deltamix_core::Error as DomainError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(#[from] DomainError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{what}:{line}: {msg}")]
    Parse { what: String, line: usize, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("{mismatches} of {total} queries disagree with the oracle")]
    OracleMismatch { mismatches: usize, total: usize },
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.name(),
            CliError::Io { .. } => "IoError",
            CliError::Parse { .. } => "ParseError",
            CliError::Config(_) => "ConfigError",
            CliError::Usage(_) => "UsageError",
            CliError::OracleMismatch { .. } => "OracleMismatch",
        }
    }

    /// 1 for domain failures, 2 for anything wrong with the inputs themselves.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::OracleMismatch { .. } => 1,
            _ => 2,
        }
    }

    pub fn parse(what: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        CliError::Parse {
            what: what.into(),
            line,
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}
