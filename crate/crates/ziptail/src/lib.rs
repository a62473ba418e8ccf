//! Command-line front end and Monte-Carlo harness for `ziptail-core`.
//!
//! The library half of this crate holds everything the `ziptail` binary
//! does, so integration tests can drive scenarios in-process: JSON
//! configuration types ([`config`]), replicate summaries ([`summary`]),
//! CSV/JSON artifact helpers ([`io`]), and the scenario runners
//! ([`scenario`]).

use std::fmt;

pub mod cli;
pub mod config;
pub mod io;
pub mod scenario;
pub mod summary;

/// Error split mirroring the process exit codes: configuration problems
/// exit with 2, runtime or statistical failures with 3.
#[derive(Debug)]
pub enum AppError {
    /// Invalid flags, config files, or specifications (exit code 2).
    Config(String),
    /// IO failures and statistical errors during a run (exit code 3).
    Runtime(String),
}

impl AppError {
    pub fn config(msg: impl Into<String>) -> Self {
        AppError::Config(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        AppError::Runtime(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) => 2,
            AppError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(msg) => write!(f, "{msg}"),
            AppError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for AppError {}

pub type Result<T> = std::result::Result<T, AppError>;
