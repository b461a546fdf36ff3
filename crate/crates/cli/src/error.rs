// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use fullerene_core::Error as EngineError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}, column {column}: {message}")]
    Config { line: usize, column: usize, message: String },
    #[error("config: {0}")]
    Invalid(String),
    #[error("{scenario} scenario: {source}")]
    Engine {
        scenario: &'static str,
        #[source]
        source: EngineError,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        CliError::Config { line, column, message: message.into() }
    }

    /// 2 for invalid input, 3 for failures while computing or writing results.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Invalid(_) => 2,
            CliError::Engine { source, .. } => match source {
                EngineError::NotHermitian(_)
                | EngineError::InvalidTrace(_)
                | EngineError::InvalidState(_)
                | EngineError::DimensionMismatch { .. }
                | EngineError::EmptyLines
                | EngineError::PresetTable(_) => 3,
                _ => 2,
            },
            CliError::Io { .. } => 3,
        }
    }
}
