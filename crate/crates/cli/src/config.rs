//! JSON experiment configuration with strict validation: unknown keys are
//! rejected and every parameter is checked before any computation starts.

use crate::{HarnessError, Result};
use geosharp::MetricKind;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Default seed of the packaged diagonal-correlation experiment.
pub const DEFAULT_DIAG_CORR_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "diag-corr")]
    DiagCorr,
    #[serde(rename = "orbit-trace")]
    OrbitTrace,
    #[serde(rename = "scalar-demo")]
    ScalarDemo,
    #[serde(rename = "sharpness-single")]
    SharpnessSingle,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::DiagCorr => "diag-corr",
            ExperimentKind::OrbitTrace => "orbit-trace",
            ExperimentKind::ScalarDemo => "scalar-demo",
            ExperimentKind::SharpnessSingle => "sharpness-single",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    Euclidean,
    Inv,
    Mix,
}

impl MetricName {
    pub fn kind(&self) -> MetricKind {
        match self {
            MetricName::Euclidean => MetricKind::Euclidean,
            MetricName::Inv => MetricKind::Inv,
            MetricName::Mix => MetricKind::Mix,
        }
    }
}

fn default_d() -> usize {
    200
}
fn default_n_models() -> usize {
    50
}
fn default_sparsity() -> f64 {
    0.9
}
fn default_noise() -> f64 {
    0.0
}
fn default_train_tol() -> f64 {
    1e-5
}
fn default_max_iters() -> usize {
    200_000
}
fn default_lr_range() -> (f64, f64) {
    (5e-5, 4e-4)
}
fn default_init_scale_range() -> (f64, f64) {
    (0.3, 6.0)
}
fn default_test_factor() -> usize {
    10
}
fn default_sharpness_batches() -> usize {
    8
}
fn default_batch_size() -> usize {
    128
}
fn default_d_in() -> usize {
    64
}
fn default_d_out() -> usize {
    10
}
fn default_hidden() -> usize {
    2
}
fn default_budget() -> usize {
    100
}
fn default_sketch() -> usize {
    20
}
fn default_alpha_grid() -> Vec<f64> {
    vec![0.1, 0.5, 1.0, 2.0, 10.0]
}
fn default_spectrum_alphas() -> Vec<f64> {
    vec![0.1, 1.0, 10.0]
}
fn default_relerr_alphas() -> Vec<f64> {
    vec![0.1, 10.0]
}
fn default_rho() -> f64 {
    0.002
}
fn default_metric() -> MetricName {
    MetricName::Inv
}
fn default_epsilon() -> f64 {
    0.0
}
fn default_n_iter() -> usize {
    150
}
fn default_restarts() -> usize {
    3
}
fn default_grid_points() -> usize {
    41
}
fn default_grid_limit() -> f64 {
    2.0
}
fn default_scalar_points() -> usize {
    5
}
fn default_model() -> String {
    "diagonal".into()
}

/// Resolved experiment configuration. All fields carry defaults so a
/// minimal `{"experiment": ..., "seed": ...}` is runnable; unknown keys
/// are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,

    // Diagonal-network data and training.
    #[serde(default = "default_d")]
    pub d: usize,
    /// Sample count; defaults to d / 2.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_n_models")]
    pub n_models: usize,
    #[serde(default = "default_sparsity")]
    pub sparsity: f64,
    #[serde(default = "default_noise")]
    pub noise: f64,
    #[serde(default = "default_train_tol")]
    pub train_tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// Per-model learning rates are log-uniform in this range.
    #[serde(default = "default_lr_range")]
    pub lr_range: (f64, f64),
    /// Per-model init scales are log-uniform in this range, in units of
    /// 1/sqrt(d).
    #[serde(default = "default_init_scale_range")]
    pub init_scale_range: (f64, f64),
    /// Held-out set size as a multiple of n.
    #[serde(default = "default_test_factor")]
    pub test_factor: usize,
    /// Number of batches the sharpness expectation averages over.
    #[serde(default = "default_sharpness_batches")]
    pub sharpness_batches: usize,

    // Matrix net and trace estimation.
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_d_in")]
    pub d_in: usize,
    #[serde(default = "default_d_out")]
    pub d_out: usize,
    #[serde(default = "default_hidden")]
    pub hidden: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_sketch")]
    pub sketch: usize,
    #[serde(default = "default_alpha_grid")]
    pub alpha_grid: Vec<f64>,
    #[serde(default = "default_spectrum_alphas")]
    pub spectrum_alphas: Vec<f64>,
    #[serde(default = "default_relerr_alphas")]
    pub relerr_alphas: Vec<f64>,
    /// Optional IDX image/label files for the orbit-trace experiment;
    /// D_in is then inferred from the image header.
    #[serde(default)]
    pub idx_images: Option<PathBuf>,
    #[serde(default)]
    pub idx_labels: Option<PathBuf>,

    // Sharpness.
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_metric")]
    pub metric: MetricName,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_n_iter")]
    pub n_iter: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,

    // Scalar demo grid.
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default = "default_grid_limit")]
    pub grid_limit: f64,
    #[serde(default = "default_scalar_points")]
    pub scalar_points: usize,

    // sharpness-single model selection: "diagonal" or "matrixnet".
    #[serde(default = "default_model")]
    pub model: String,

    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Worker threads for per-model / per-cell fan-out; 1 = serial.
    #[serde(default)]
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    pub fn resolved_n(&self) -> usize {
        self.n.unwrap_or(self.d / 2)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.d == 0 {
            return fail("d must be positive".into());
        }
        if self.resolved_n() == 0 {
            return fail("n must be positive".into());
        }
        if !(0.0..1.0).contains(&self.sparsity) {
            return fail(format!("sparsity {} must lie in [0, 1)", self.sparsity));
        }
        if !self.rho.is_finite() || self.rho <= 0.0 {
            return fail(format!("rho {} must be positive", self.rho));
        }
        if self.epsilon < 0.0 {
            return fail(format!("epsilon {} must be nonnegative", self.epsilon));
        }
        if !self.train_tol.is_finite() || self.train_tol <= 0.0 {
            return fail("train_tol must be positive".into());
        }
        if self.lr_range.0 <= 0.0 || self.lr_range.1 < self.lr_range.0 {
            return fail(format!("invalid lr_range {:?}", self.lr_range));
        }
        if self.init_scale_range.0 <= 0.0 || self.init_scale_range.1 < self.init_scale_range.0 {
            return fail(format!(
                "invalid init_scale_range {:?}",
                self.init_scale_range
            ));
        }
        if self.n_models == 0 {
            return fail("n_models must be positive".into());
        }
        if self.sharpness_batches == 0 {
            return fail("sharpness_batches must be positive".into());
        }
        match self.experiment {
            ExperimentKind::OrbitTrace => {
                if self.hidden == 0 || self.d_in == 0 || self.d_out < 2 {
                    return fail("orbit-trace needs hidden >= 1, d_in >= 1, d_out >= 2".into());
                }
                if self.alpha_grid.is_empty() || self.alpha_grid.contains(&0.0) {
                    return fail("alpha_grid must be nonempty with nonzero entries".into());
                }
                if self.budget < 2 * self.sketch + 1 {
                    return fail(format!(
                        "budget {} too small for sketch size {} (needs at least 2k + 1)",
                        self.budget, self.sketch
                    ));
                }
                if self.idx_images.is_some() != self.idx_labels.is_some() {
                    return fail("idx_images and idx_labels must be given together".into());
                }
            }
            ExperimentKind::ScalarDemo => {
                if self.grid_points < 2 {
                    return fail("grid_points must be at least 2".into());
                }
                if !self.grid_limit.is_finite() || self.grid_limit <= 0.0 {
                    return fail("grid_limit must be positive".into());
                }
                if self.scalar_points == 0 {
                    return fail("scalar_points must be positive".into());
                }
            }
            ExperimentKind::SharpnessSingle => {
                if self.model != "diagonal" && self.model != "matrixnet" {
                    return fail(format!(
                        "unknown model \"{}\" (expected \"diagonal\" or \"matrixnet\")",
                        self.model
                    ));
                }
            }
            ExperimentKind::DiagCorr => {}
        }
        Ok(())
    }
}

/// Parse and validate a JSON configuration.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig =
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
