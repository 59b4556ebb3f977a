//! Experiment harness: configuration parsing, the experiment runners, and
//! CSV/JSON artifact emission.

pub mod artifacts;
pub mod config;
pub mod experiments;

pub use artifacts::RunArtifacts;
pub use config::DEFAULT_DIAG_CORR_SEED;
pub use config::{parse_config, ExperimentConfig, ExperimentKind, MetricName};
pub use experiments::{
    run_diag_corr, run_experiment, run_orbit_trace, run_scalar_demo, run_sharpness_single,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("experiment error: {0}")]
    Experiment(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<geosharp::Error> for HarnessError {
    fn from(e: geosharp::Error) -> Self {
        HarnessError::Experiment(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
