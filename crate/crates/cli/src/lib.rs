//! Seeded instance generation, suite execution and report output for the
//! `fracineq` command-line tool.

pub mod config;
pub mod dispatch;
pub mod generate;
pub mod output;
pub mod replay;
pub mod suite;
pub mod sweep;

pub use config::InstanceConfig;
pub use dispatch::{evaluate, EqId};
pub use generate::{gen_instance, gen_instance_with, Instance, Requirements};
pub use suite::{run_suite, SuiteId, SuiteOptions, SuiteReport, Summary};
pub use sweep::{parse_alphas, sweep_alpha, write_csv, Bound, SweepRow};

use fracineq_core::{EngineError, MathError, ModelError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("instance {index}: no valid sample after {attempts} attempts (last: {last})")]
    Generation { index: u64, attempts: usize, last: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
