//! Sharpness measures: worst-case adaptive sharpness over a scaled ball,
//! and geodesic sharpness over metric-norm-bounded horizontal geodesics,
//! both maximized with Auto-PGD. Closed forms for the scalar and diagonal
//! models serve as oracles.

mod adaptive;
mod apgd;
mod closed_form;
mod geodesic;
mod norm;

pub use adaptive::adaptive_sharpness_worst;
pub use apgd::{run_auto_pgd, AscentSpace};
pub use closed_form::{diagonal_sharpness_closed_form, scalar_sharpness_closed_form};
pub use geodesic::{
    diagonal_geodesic_sharpness, matrixnet_geodesic_sharpness, scalar_geodesic_sharpness, BallNorm,
    CurveMode, DiagonalGeodesicOptions,
};
pub use norm::{group_norm, NormGroup};

use crate::error::Result;

/// Projected-gradient-ascent configuration shared by the sharpness
/// measures.
///
/// The schedule follows Auto-PGD: momentum 0.75, initial step
/// `eta0_fraction * rho`, step halving at the checkpoint fractions when
/// either standard restart condition triggers, and random restarts
/// initialized uniformly on the rho-sphere (then projected onto the
/// feasible set).
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessConfig {
    /// Perturbation radius in the measure's constraint norm.
    pub rho: f64,
    pub n_iter: usize,
    pub restarts: usize,
    pub momentum: f64,
    /// Initial step as a fraction of rho.
    pub eta0_fraction: f64,
    /// Strictly increasing fractions of `n_iter` in (0, 1).
    pub checkpoint_fractions: Vec<f64>,
}

impl SharpnessConfig {
    pub fn new(rho: f64) -> Self {
        Self {
            rho,
            n_iter: 100,
            restarts: 3,
            momentum: 0.75,
            eta0_fraction: 0.25,
            checkpoint_fractions: vec![
                0.22, 0.37, 0.49, 0.59, 0.67, 0.74, 0.79, 0.84, 0.88, 0.92, 0.95, 0.98,
            ],
        }
    }

    pub fn with_iters(mut self, n_iter: usize) -> Self {
        self.n_iter = n_iter;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        use crate::error::Error;
        if !self.rho.is_finite() || self.rho <= 0.0 {
            return Err(Error::Precondition("rho must be positive".into()));
        }
        let mut prev = 0.0;
        for &f in &self.checkpoint_fractions {
            if f <= prev || f >= 1.0 {
                return Err(Error::Precondition(
                    "checkpoint fractions must be strictly increasing in (0, 1)".into(),
                ));
            }
            prev = f;
        }
        Ok(())
    }
}

/// Result of a worst-case sharpness maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessResult {
    /// Best loss increase found; at least the zero-perturbation value 0.
    pub value: f64,
    /// Maximizing perturbation in the measure's flat coordinates.
    pub argmax_direction: Vec<f64>,
    pub iterations_used: usize,
    /// Iteration (within the winning restart) where the best value appeared.
    pub best_iteration: usize,
    /// Best value of each restart; `value` is their maximum.
    pub restart_values: Vec<f64>,
}

/// Mean sharpness over per-batch results (the expectation over batches of
/// the worst-case measure).
pub fn average_sharpness(results: &[SharpnessResult]) -> f64 {
    assert!(!results.is_empty());
    results.iter().map(|r| r.value).sum::<f64>() / results.len() as f64
}
