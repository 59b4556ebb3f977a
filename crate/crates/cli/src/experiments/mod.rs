//! The experiment runners.

mod diag_corr;
mod orbit_trace;
mod scalar_demo;
mod sharpness_single;

pub use diag_corr::run_diag_corr;
pub use orbit_trace::run_orbit_trace;
pub use scalar_demo::run_scalar_demo;
pub use sharpness_single::run_sharpness_single;

use crate::{ExperimentConfig, ExperimentKind, HarnessError, Result, RunArtifacts};
use std::path::PathBuf;

/// Dispatch on the configured experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunArtifacts> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::DiagCorr => run_diag_corr(cfg),
        ExperimentKind::OrbitTrace => run_orbit_trace(cfg),
        ExperimentKind::ScalarDemo => run_scalar_demo(cfg),
        ExperimentKind::SharpnessSingle => run_sharpness_single(cfg),
    }
}

pub(crate) fn resolve_output_dir(cfg: &ExperimentConfig) -> Result<PathBuf> {
    let dir = cfg
        .output_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("runs").join(cfg.experiment.name()));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Run a closure over indices, optionally on a rayon pool with the
/// configured thread count. Results are collected in index order, so the
/// output is identical however the work is scheduled.
pub(crate) fn fan_out<T: Send>(
    jobs: Option<usize>,
    count: usize,
    f: impl Fn(usize) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    match jobs {
        Some(1) => (0..count).map(f).collect(),
        jobs => {
            use rayon::prelude::*;
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(j) = jobs {
                builder = builder.num_threads(j);
            }
            let pool = builder
                .build()
                .map_err(|e| HarnessError::Experiment(e.to_string()))?;
            pool.install(|| (0..count).into_par_iter().map(f).collect())
        }
    }
}

/// Echo of the resolved configuration for the summary artifact.
pub(crate) fn config_echo(cfg: &ExperimentConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

pub(crate) const CRATE_VERSION: &str = env!("CARGO_PKG_VERSION");
