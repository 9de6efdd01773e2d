//! Error type shared across the crate, with a stable mapping to CLI exit codes.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Unrecognized or malformed file header.
    #[error("format error: {0}")]
    Format(String),
    /// A well-formed header whose payload is inconsistent with it.
    #[error("corrupt data: {0}")]
    Corrupt(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// Non-finite values, divergence, or other numeric failure.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// An operation called outside its valid lifecycle (e.g. backward with no
    /// recorded forward pass).
    #[error("invalid state: {0}")]
    State(String),
}

impl Error {
    /// Exit codes: 0 success, 1 usage/config, 2 data/format, 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Io { .. } | Error::Format(_) | Error::Corrupt(_) | Error::Shape(_) => 2,
            Error::Numeric(_) | Error::State(_) => 3,
        }
    }

    /// Helper for wrapping `std::io::Error` with path context.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
