//! Scenario I/O, instance generators, the seed-indexed fuzz engine and the
//! worked-example reproduction suite for the `grusslab-core` checks. The
//! `gruss-lab` binary in this crate exposes all of it on the command line.

#![forbid(unsafe_code)]

pub mod formats;
pub mod fuzz;
pub mod generators;
pub mod reproduce;
pub mod runcheck;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Malformed scenario, unknown id, missing field.
    #[error("schema error: {0}")]
    Schema(String),
    /// A check refused its hypotheses or failed numerically.
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// CLI exit code: 2 = usage/schema, 3 = numerical/hypothesis failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Schema(_) | HarnessError::Json(_) => 2,
            HarnessError::Check(_) | HarnessError::Io(_) => 3,
        }
    }
}
