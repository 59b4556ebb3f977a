//! Christoffel quadratic forms and second-order geodesic steps.
//!
//! Geodesics of the quotient metrics have no closed form for general
//! matrix factors, so curves are expanded to second order,
//! `gamma(t) = x + xi t - Gamma(xi, xi) t^2 / 2`, with the quadratic form
//! derived from the Euler-Lagrange equations of the metric energy.

use crate::error::{Error, Result};
use crate::geometry::{horizontality_residual, FactorPair, Metric, MetricKind, TangentPair};
use crate::numerics::DenseMatrix;

/// Tolerance on the horizontality of inputs to the Christoffel form; the
/// expressions below assume horizontal tangent vectors.
pub const HORIZONTALITY_TOLERANCE: f64 = 1e-6;

fn inverted(gram: &DenseMatrix, context: &'static str) -> Result<DenseMatrix> {
    gram.inverse().map_err(|_| Error::SingularGram { context })
}

/// The quadratic form `Gamma(xi, xi)` for a horizontal tangent vector.
///
/// Inv metric, G component (H analogous):
/// `-xi_G Gb^-1 (xi_G^T G + G^T xi_G) + G Gb^-1 xi_G^T xi_G`.
///
/// Mix metric, G component (H symmetric):
/// `xi_G (xi_H^T H + H^T xi_H) Hb^-1 - G (xi_H^T xi_H) Hb^-1`.
///
/// The Euclidean form is zero. Inputs whose horizontality residual
/// exceeds [`HORIZONTALITY_TOLERANCE`] are rejected.
pub fn christoffel_quadratic(
    metric: &Metric,
    point: &FactorPair,
    xi: &TangentPair,
) -> Result<TangentPair> {
    if metric.kind == MetricKind::Euclidean {
        return Ok(TangentPair::zeros_like(point));
    }
    let residual = horizontality_residual(metric, point, xi);
    if residual > HORIZONTALITY_TOLERANCE {
        return Err(Error::NotHorizontal {
            residual,
            tolerance: HORIZONTALITY_TOLERANCE,
        });
    }
    christoffel_quadratic_unchecked(metric, point, xi)
}

/// [`christoffel_quadratic`] without the horizontality check; used by the
/// ascent loop right after an explicit projection.
pub fn christoffel_quadratic_unchecked(
    metric: &Metric,
    point: &FactorPair,
    xi: &TangentPair,
) -> Result<TangentPair> {
    match metric.kind {
        MetricKind::Euclidean => Ok(TangentPair::zeros_like(point)),
        MetricKind::Inv => {
            let gg_inv = inverted(&point.gram_g(metric.epsilon), "inv christoffel G")?;
            let hh_inv = inverted(&point.gram_h(metric.epsilon), "inv christoffel H")?;
            let part = |factor: &DenseMatrix, tangent: &DenseMatrix, gram_inv: &DenseMatrix| {
                let cross = tangent.tr_matmul(factor).add(&factor.tr_matmul(tangent));
                let first = tangent.matmul(gram_inv).matmul(&cross).scale(-1.0);
                let second = factor.matmul(gram_inv).matmul(&tangent.gram());
                first.add(&second)
            };
            Ok(TangentPair::new(
                part(&point.g, &xi.g, &gg_inv),
                part(&point.h, &xi.h, &hh_inv),
            ))
        }
        MetricKind::Mix => {
            let gg_inv = inverted(&point.gram_g(metric.epsilon), "mix christoffel G")?;
            let hh_inv = inverted(&point.gram_h(metric.epsilon), "mix christoffel H")?;
            let part = |this_factor: &DenseMatrix,
                        this_tangent: &DenseMatrix,
                        other_factor: &DenseMatrix,
                        other_tangent: &DenseMatrix,
                        other_gram_inv: &DenseMatrix| {
                let cross = other_tangent
                    .tr_matmul(other_factor)
                    .add(&other_factor.tr_matmul(other_tangent));
                let first = this_tangent.matmul(&cross).matmul(other_gram_inv);
                let second = this_factor
                    .matmul(&other_tangent.gram())
                    .matmul(other_gram_inv);
                first.sub(&second)
            };
            Ok(TangentPair::new(
                part(&point.g, &xi.g, &point.h, &xi.h, &hh_inv),
                part(&point.h, &xi.h, &point.g, &xi.g, &gg_inv),
            ))
        }
    }
}

/// Second-order geodesic point `x + xi t - Gamma(xi, xi) t^2 / 2`.
pub fn geodesic_step(
    metric: &Metric,
    point: &FactorPair,
    xi: &TangentPair,
    t: f64,
) -> Result<FactorPair> {
    assert!(t.is_finite(), "geodesic parameter must be finite");
    if t == 0.0 {
        return Ok(point.clone());
    }
    let gamma = christoffel_quadratic(metric, point, xi)?;
    Ok(geodesic_step_with_acceleration(point, xi, &gamma, t))
}

/// The polynomial step shared by every caller; `gamma` is the output of
/// [`christoffel_quadratic`] at `(point, xi)`.
pub fn geodesic_step_with_acceleration(
    point: &FactorPair,
    xi: &TangentPair,
    gamma: &TangentPair,
    t: f64,
) -> FactorPair {
    let mut g = point.g.clone();
    g.axpy(t, &xi.g);
    g.axpy(-0.5 * t * t, &gamma.g);
    let mut h = point.h.clone();
    h.axpy(t, &xi.h);
    h.axpy(-0.5 * t * t, &gamma.h);
    FactorPair::new(g, h)
}
