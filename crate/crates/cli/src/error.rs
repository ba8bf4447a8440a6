use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const NUMERIC: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error in `{field}`: {reason}")]
    Schema { field: String, reason: String },
    #[error("hamiltonian is not Hermitian (max deviation {max_deviation:e})")]
    Hermiticity { max_deviation: f64 },
    #[error("numerical failure: {0}")]
    Numeric(itqsl::Error),
    #[error("{0}")]
    Model(itqsl::Error),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Schema {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Schema { .. } | CliError::Hermiticity { .. } | CliError::Model(_) => {
                exit::INPUT
            }
            CliError::Numeric(_) => exit::NUMERIC,
            CliError::Io { .. } => exit::IO,
        }
    }
}

impl From<itqsl::Error> for CliError {
    fn from(e: itqsl::Error) -> Self {
        match e {
            itqsl::Error::NotHermitian { max_deviation } => CliError::Hermiticity { max_deviation },
            e if e.is_numeric() => CliError::Numeric(e),
            e => CliError::Model(e),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
