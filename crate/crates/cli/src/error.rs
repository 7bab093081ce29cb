use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A core error raised while reading a particular file.
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        #[source]
        source: seqtag::Error,
    },

    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Core(#[from] seqtag::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn core_code(e: &seqtag::Error) -> u8 {
    match e {
        seqtag::Error::Fold { source, .. } | seqtag::Error::GridPoint { source, .. } => core_code(source),
        seqtag::Error::Parameter(_) => 1,
        e if e.is_numeric() => 3,
        _ => 2,
    }
}

impl CliError {
    /// 1 usage, 2 data or I/O, 3 numeric failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Data(_) => 2,
            CliError::Input { source, .. } => core_code(source).max(2),
            CliError::Core(e) => core_code(e),
        }
    }
}
