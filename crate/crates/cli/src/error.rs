use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// A single problem found in a scenario, located by JSON path.
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

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("scenario is not valid JSON: {0}")]
    Parse(String),
    #[error("scenario has {} problem(s):\n{}", .0.len(), list(.0))]
    Validation(Vec<Violation>),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Cap(String),
    #[error(transparent)]
    Model(#[from] fairshare_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| format!("  {x}")).collect::<Vec<_>>().join("\n")
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use fairshare_core::Error as E;
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Cap(_) | CliError::Model(E::RosterTooLarge { .. } | E::TooManyPlayers { .. }) => EXIT_CAP,
            _ => EXIT_VALIDATION,
        }
    }
}
