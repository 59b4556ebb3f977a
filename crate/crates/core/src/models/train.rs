//! Full-batch gradient descent for diagonal networks.

use crate::error::{Error, Result};
use crate::models::{diagonal_grad, diagonal_loss, DiagonalParams, RegressionData};
use crate::numerics::SeededRng;

const DIVERGENCE_LIMIT: f64 = 1e8;

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: DiagonalParams,
    pub converged: bool,
    pub iterations: usize,
    pub final_loss: f64,
    /// `(iteration, loss)` samples along the trajectory.
    pub history: Vec<(usize, f64)>,
}

/// Train a diagonal net to `diagonal_loss <= tol` by full-batch gradient
/// descent, or return `converged: false` after `max_iters`.
///
/// Initialization: `u, v` i.i.d. uniform in
/// `[0.5 init_scale, 1.5 init_scale]` with independent random signs.
/// Errors out when the loss exceeds 1e8.
pub fn train_diagonal(
    data: &RegressionData,
    lr: f64,
    init_scale: f64,
    tol: f64,
    max_iters: usize,
    rng: &mut SeededRng,
) -> Result<TrainOutcome> {
    assert!(lr > 0.0, "learning rate must be positive");
    assert!(tol > 0.0, "tolerance must be positive");
    let d = data.d();
    let mut params =
        DiagonalParams::new(init_vec(d, init_scale, rng), init_vec(d, init_scale, rng));
    let record_every = (max_iters / 200).max(1);
    let mut history = Vec::new();
    let mut loss = diagonal_loss(&params, data)?;
    history.push((0, loss));
    let mut iterations = 0;
    while loss > tol && iterations < max_iters {
        let (g_u, g_v) = diagonal_grad(&params, data)?;
        for (u, g) in params.u.iter_mut().zip(&g_u) {
            *u -= lr * g;
        }
        for (v, g) in params.v.iter_mut().zip(&g_v) {
            *v -= lr * g;
        }
        iterations += 1;
        loss = diagonal_loss(&params, data)?;
        if !loss.is_finite() || loss > DIVERGENCE_LIMIT {
            return Err(Error::Divergence(format!(
                "training loss {loss:.3e} after {iterations} iterations at lr {lr:.3e}"
            )));
        }
        if iterations % record_every == 0 {
            history.push((iterations, loss));
        }
    }
    history.push((iterations, loss));
    Ok(TrainOutcome {
        converged: loss <= tol,
        params,
        iterations,
        final_loss: loss,
        history,
    })
}

fn init_vec(d: usize, scale: f64, rng: &mut SeededRng) -> Vec<f64> {
    (0..d)
        .map(|_| rng.uniform(0.5 * scale, 1.5 * scale) * rng.sign())
        .collect()
}
