//! Experiment driver for `adiabatic-kms`: configuration, output formats, the
//! subcommands behind the `adiabatic-kms` binary and the acceptance suite.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod formats;

use std::path::{Path, PathBuf};

pub use config::RunConfig;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    CriterionFailed = 1,
    Config = 2,
    Numerical = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] adiabatic_kms::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit(&self) -> Exit {
        use adiabatic_kms::Error as E;
        match self {
            CliError::Core(E::InvalidParameter { .. } | E::OrderCapExceeded { .. }) => Exit::Config,
            CliError::Core(_) => Exit::Numerical,
            _ => Exit::Config,
        }
    }
}
