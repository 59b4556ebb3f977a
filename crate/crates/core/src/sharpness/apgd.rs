//! The Auto-PGD ascent engine shared by every worst-case sharpness
//! measure.
//!
//! The engine maximizes a loss difference over a feasible set described
//! by a structure projection (horizontal space; identity for elementwise
//! measures) and a constraint norm (the rho-ball). Steps use a
//! metric-transformed gradient, momentum 0.75, and the Auto-PGD step-size
//! halving conditions at checkpoint iterations.

use crate::error::{Error, Result};
use crate::numerics::SeededRng;
use crate::sharpness::{SharpnessConfig, SharpnessResult};

pub type LossFn<'a> = Box<dyn Fn(&[f64]) -> Result<f64> + 'a>;
pub type DirectionFn<'a> = Box<dyn Fn(&[f64]) -> Result<Vec<f64>> + 'a>;
pub type ProjectFn<'a> = Box<dyn Fn(&[f64]) -> Vec<f64> + 'a>;
pub type NormFn<'a> = Box<dyn Fn(&[f64]) -> f64 + 'a>;

/// A sharpness maximization problem over a flat perturbation vector.
pub struct AscentSpace<'a> {
    pub dim: usize,
    /// Loss at the point reached by perturbation `xi`.
    pub loss_at: LossFn<'a>,
    /// Metric-transformed ascent direction at the perturbed point.
    pub ascent_direction: DirectionFn<'a>,
    /// Structural projection (e.g. onto the horizontal space).
    pub project_structure: ProjectFn<'a>,
    /// Norm defining the feasible rho-ball.
    pub constraint_norm: NormFn<'a>,
}

impl AscentSpace<'_> {
    /// Project onto the feasible set: structure first, then rescale into
    /// the ball (`xi <- xi * min(1, rho / ||xi||)`).
    fn project(&self, xi: &[f64], rho: f64) -> Vec<f64> {
        let mut s = (self.project_structure)(xi);
        let n = (self.constraint_norm)(&s);
        if n > rho && n > 0.0 {
            let f = rho / n;
            for v in &mut s {
                *v *= f;
            }
        }
        s
    }

    /// Project structurally and rescale onto the rho-sphere.
    fn to_sphere(&self, xi: &[f64], rho: f64) -> Vec<f64> {
        let mut s = (self.project_structure)(xi);
        let n = (self.constraint_norm)(&s);
        if n > 0.0 {
            let f = rho / n;
            for v in &mut s {
                *v *= f;
            }
        }
        s
    }
}

fn check_finite(value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Divergence(format!(
            "non-finite loss {value} during sharpness ascent"
        )))
    }
}

/// Run Auto-PGD with random restarts; returns the best perturbation found
/// and per-restart diagnostics. With `n_iter == 0` the zero perturbation
/// is returned.
pub fn run_auto_pgd(
    space: &AscentSpace,
    cfg: &SharpnessConfig,
    rng: &SeededRng,
) -> Result<SharpnessResult> {
    cfg.validate()?;
    if cfg.n_iter == 0 || cfg.restarts == 0 {
        return Ok(SharpnessResult {
            value: 0.0,
            argmax_direction: vec![0.0; space.dim],
            iterations_used: 0,
            best_iteration: 0,
            restart_values: vec![],
        });
    }
    let base_loss = check_finite((space.loss_at)(&vec![0.0; space.dim])?)?;

    let mut best: Option<(f64, Vec<f64>, usize)> = None;
    let mut restart_values = Vec::with_capacity(cfg.restarts);
    for r in 0..cfg.restarts {
        let mut restart_rng = rng.substream(r as u64);
        let raw: Vec<f64> = (0..space.dim).map(|_| restart_rng.normal()).collect();
        let xi0 = space.to_sphere(&raw, cfg.rho);
        let (value, xi, iter) = ascend(space, cfg, base_loss, xi0)?;
        restart_values.push(value);
        if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
            best = Some((value, xi, iter));
        }
    }
    let (value, argmax_direction, best_iteration) = best.expect("at least one restart ran");
    Ok(SharpnessResult {
        value,
        argmax_direction,
        iterations_used: cfg.n_iter,
        best_iteration,
        restart_values,
    })
}

/// One ascent trajectory; returns (best loss increase, best xi, iteration
/// of the best value).
fn ascend(
    space: &AscentSpace,
    cfg: &SharpnessConfig,
    base_loss: f64,
    xi0: Vec<f64>,
) -> Result<(f64, Vec<f64>, usize)> {
    let rho = cfg.rho;
    let mut eta = cfg.eta0_fraction * rho;
    let alpha = cfg.momentum;

    let checkpoints: Vec<usize> = cfg
        .checkpoint_fractions
        .iter()
        .map(|f| ((f * cfg.n_iter as f64).floor() as usize).max(1))
        .collect();

    let mut xi_prev = xi0.clone();
    let mut xi = xi0;
    let mut f_curr = check_finite((space.loss_at)(&xi)?)?;

    let mut f_max = f_curr;
    let mut xi_max = xi.clone();
    let mut best_iter = 0usize;

    let mut successes = 0usize;
    let mut last_checkpoint = 0usize;
    let mut eta_at_checkpoint = eta;
    let mut fmax_at_checkpoint = f_max;

    for k in 0..cfg.n_iter {
        let g = (space.ascent_direction)(&xi)?;
        let stepped: Vec<f64> = xi.iter().zip(&g).map(|(&x, &gi)| x + eta * gi).collect();
        let z = space.project(&stepped, rho);
        // Momentum combination, projected back onto the feasible set.
        let combined: Vec<f64> = xi
            .iter()
            .zip(&z)
            .zip(&xi_prev)
            .map(|((&x, &zi), &xp)| x + alpha * (zi - x) + (1.0 - alpha) * (x - xp))
            .collect();
        let xi_next = space.project(&combined, rho);
        let f_next = check_finite((space.loss_at)(&xi_next)?)?;

        if f_next > f_curr {
            successes += 1;
        }
        if f_next > f_max {
            f_max = f_next;
            xi_max = xi_next.clone();
            best_iter = k + 1;
        }
        xi_prev = xi;
        xi = xi_next;
        f_curr = f_next;

        if checkpoints.contains(&(k + 1)) {
            let window = (k + 1) - last_checkpoint;
            let condition1 = (successes as f64) < 0.75 * window as f64;
            let condition2 = eta == eta_at_checkpoint && f_max == fmax_at_checkpoint;
            if condition1 || condition2 {
                eta *= 0.5;
                xi = xi_max.clone();
                xi_prev = xi.clone();
                f_curr = f_max;
            }
            successes = 0;
            last_checkpoint = k + 1;
            eta_at_checkpoint = eta;
            fmax_at_checkpoint = f_max;
        }
    }
    Ok(((f_max - base_loss).max(0.0), xi_max, best_iter))
}
