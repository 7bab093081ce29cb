use thiserror::Error;

use crate::optimize::OptimizeError;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text. Lines and columns are 1-based; the column counts
    /// Unicode codepoints.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("corpus contains no sentences")]
    EmptyCorpus,

    #[error("invalid token {0:?}")]
    InvalidToken(String),

    #[error("invalid tag {0:?}")]
    InvalidTag(String),

    #[error("invalid tag inventory: {0}")]
    InvalidInventory(String),

    /// A remap rule produced a tag outside the destination inventory.
    #[error("rule `{rule}` produces tag {tag:?}, which is not in the target inventory")]
    InventoryViolation { rule: String, tag: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error(transparent)]
    Optimize(#[from] OptimizeError),

    /// Model or report container that cannot be read.
    #[error("model format error: {0}")]
    Format(String),

    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("grid point c1={c1}, c2={c2}: {source}")]
    GridPoint {
        c1: f64,
        c2: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn param(message: impl Into<String>) -> Self {
        Self::Parameter(message.into())
    }

    pub(crate) fn format(message: impl Into<String>) -> Self {
        Self::Format(message.into())
    }

    /// True when the error originates in numerical optimization rather than in
    /// the input data.
    pub fn is_numeric(&self) -> bool {
        match self {
            Self::Optimize(_) => true,
            Self::Fold { source, .. } | Self::GridPoint { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
