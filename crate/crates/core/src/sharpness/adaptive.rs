//! Worst-case adaptive sharpness: the maximal loss increase over the
//! elementwise-rescaled ball `{ delta : ||delta . c^-1||_2 <= rho }`.

use crate::error::{Error, Result};
use crate::numerics::SeededRng;
use crate::sharpness::{run_auto_pgd, AscentSpace, SharpnessConfig, SharpnessResult};

/// Build the elementwise ascent space shared by adaptive sharpness and
/// the corrections-off reduction of geodesic sharpness: straight-line
/// perturbations, gradient transform `g . c^2`, ball norm
/// `||delta . c^-1||_2`.
pub(crate) fn elementwise_space<'a>(
    loss: &'a (dyn Fn(&[f64]) -> Result<f64> + Sync),
    grad: &'a (dyn Fn(&[f64]) -> Result<Vec<f64>> + Sync),
    w0: &'a [f64],
    c: &'a [f64],
) -> AscentSpace<'a> {
    let dim = w0.len();
    AscentSpace {
        dim,
        loss_at: Box::new(move |delta: &[f64]| {
            let w: Vec<f64> = w0.iter().zip(delta).map(|(&a, &d)| a + d).collect();
            loss(&w)
        }),
        ascent_direction: Box::new(move |delta: &[f64]| {
            let w: Vec<f64> = w0.iter().zip(delta).map(|(&a, &d)| a + d).collect();
            let g = grad(&w)?;
            Ok(g.iter().zip(c).map(|(&gi, &ci)| gi * ci * ci).collect())
        }),
        project_structure: Box::new(|delta: &[f64]| delta.to_vec()),
        constraint_norm: Box::new(move |delta: &[f64]| {
            delta
                .iter()
                .zip(c)
                .map(|(&d, &ci)| (d / ci) * (d / ci))
                .sum::<f64>()
                .sqrt()
        }),
    }
}

/// Worst-case adaptive sharpness
/// `max_{||delta . c^-1|| <= rho} L(w + delta) - L(w)` by projected
/// gradient ascent, best over the trajectory and over restarts.
///
/// `c` must be entrywise positive (usually `|w|`).
pub fn adaptive_sharpness_worst(
    loss: &(dyn Fn(&[f64]) -> Result<f64> + Sync),
    grad: &(dyn Fn(&[f64]) -> Result<Vec<f64>> + Sync),
    w0: &[f64],
    c: &[f64],
    cfg: &SharpnessConfig,
    rng: &SeededRng,
) -> Result<SharpnessResult> {
    if c.len() != w0.len() {
        return Err(Error::ShapeMismatch(
            "scaling vector length must match parameters".into(),
        ));
    }
    if c.iter().any(|&ci| !ci.is_finite() || ci <= 0.0) {
        return Err(Error::Precondition(
            "adaptive sharpness needs an entrywise positive scaling vector".into(),
        ));
    }
    let space = elementwise_space(loss, grad, w0, c);
    run_auto_pgd(&space, cfg, rng)
}
