//! Metric inner products and Riemannian gradients.

use crate::error::{Error, Result};
use crate::geometry::{FactorPair, Metric, MetricKind, TangentPair};
use crate::numerics::DenseMatrix;

fn inverted_gram(gram: &DenseMatrix, context: &'static str) -> Result<DenseMatrix> {
    gram.inverse().map_err(|_| Error::SingularGram { context })
}

/// `Tr(M * x^T * z)` for an h x h weight `M` and equally shaped `x`, `z`.
fn weighted_block(weight: &DenseMatrix, x: &DenseMatrix, z: &DenseMatrix) -> f64 {
    // Tr(M xT z) = <x M^T, z>_F; weights here are symmetric.
    x.matmul(weight).inner(z)
}

/// Inner product of two tangent vectors under the chosen metric.
pub fn metric_inner(
    metric: &Metric,
    point: &FactorPair,
    xi: &TangentPair,
    zeta: &TangentPair,
) -> Result<f64> {
    let raw = match metric.kind {
        MetricKind::Euclidean => xi.euclidean_inner(zeta),
        MetricKind::Inv => {
            let wg = inverted_gram(&point.gram_g(metric.epsilon), "inv metric G")?;
            let wh = inverted_gram(&point.gram_h(metric.epsilon), "inv metric H")?;
            weighted_block(&wg, &xi.g, &zeta.g) + weighted_block(&wh, &xi.h, &zeta.h)
        }
        MetricKind::Mix => {
            let wg = point.gram_h(metric.epsilon);
            let wh = point.gram_g(metric.epsilon);
            weighted_block(&wg, &xi.g, &zeta.g) + weighted_block(&wh, &xi.h, &zeta.h)
        }
    };
    Ok(metric.scale * raw)
}

/// Metric norm `sqrt(<xi, xi>)`.
pub fn metric_norm(metric: &Metric, point: &FactorPair, xi: &TangentPair) -> Result<f64> {
    Ok(metric_inner(metric, point, xi, xi)?.max(0.0).sqrt())
}

/// Riemannian gradient from the Euclidean gradient: the unique tangent
/// vector with `<grad, xi>_metric = <egrad, xi>_euclidean` for all `xi`.
pub fn riemannian_gradient(
    metric: &Metric,
    point: &FactorPair,
    egrad: &TangentPair,
) -> Result<TangentPair> {
    let raw = match metric.kind {
        MetricKind::Euclidean => egrad.clone(),
        MetricKind::Inv => TangentPair::new(
            egrad.g.matmul(&point.gram_g(metric.epsilon)),
            egrad.h.matmul(&point.gram_h(metric.epsilon)),
        ),
        MetricKind::Mix => {
            let gh_inv = inverted_gram(&point.gram_h(metric.epsilon), "mix gradient H")?;
            let gg_inv = inverted_gram(&point.gram_g(metric.epsilon), "mix gradient G")?;
            TangentPair::new(egrad.g.matmul(&gh_inv), egrad.h.matmul(&gg_inv))
        }
    };
    Ok(raw.scale(1.0 / metric.scale))
}
