use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A single failed configuration check, addressed by its dotted field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration ({} violation(s)):\n{}", .0.len(), join_violations(.0))]
    Config(Vec<Violation>),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("unknown citizen id {0}")]
    UnknownId(u32),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("failed to parse scenario: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config(vec![Violation {
            path: path.into(),
            message: message.into(),
        }])
    }

    pub(crate) fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }

    /// Violations carried by a configuration error, empty for any other kind.
    pub fn violations(&self) -> &[Violation] {
        match self {
            Error::Config(v) => v,
            _ => &[],
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("  - {x}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
