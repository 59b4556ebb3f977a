//! Vertical generators and the projection onto the horizontal space.
//!
//! The vertical space at `(G, H)` is spanned by `(-G E, H E^T)` over all
//! h x h generators `E` (the derivative of the action at the identity).
//! The projection keeps the tangent vector's quotient meaning and removes
//! its along-orbit component: `xi -> (xi_G + G L, xi_H - H L^T)` with `L`
//! chosen so the result is metric-orthogonal to every vertical direction.
//!
//! For the inv metric `L` solves a Sylvester equation; for the mix metric
//! it has a closed form. Orthogonality of the output to the verticals is
//! equivalent to
//!
//! - inv: `xi_G^T G Hb = Gb H^T xi_H`
//! - mix: `G^T xi_G Hb = Gb xi_H^T H`
//!
//! with `Gb`, `Hb` the (relaxed) Grams of G and H.

use crate::error::Result;
use crate::geometry::{FactorPair, Metric, MetricKind, TangentPair};
use crate::numerics::{sylvester_general, DenseMatrix};

/// The vertical tangent direction generated by `E`: `(-G E, H E^T)`.
pub fn vertical_generator(point: &FactorPair, e: &DenseMatrix) -> TangentPair {
    let h = point.rank();
    assert_eq!(e.shape(), (h, h), "generator must be h x h");
    TangentPair::new(point.g.matmul(e).scale(-1.0), point.h.matmul_tr(e))
}

/// Residual of the metric-specific horizontality condition, normalized by
/// the magnitude of its two sides.
pub fn horizontality_residual(metric: &Metric, point: &FactorPair, xi: &TangentPair) -> f64 {
    let (lhs, rhs) = match metric.kind {
        MetricKind::Euclidean => (point.g.tr_matmul(&xi.g), xi.h.tr_matmul(&point.h)),
        MetricKind::Inv => {
            let gram_g = point.gram_g(metric.epsilon);
            let gram_h = point.gram_h(metric.epsilon);
            (
                xi.g.tr_matmul(&point.g).matmul(&gram_h),
                gram_g.matmul(&point.h.tr_matmul(&xi.h)),
            )
        }
        MetricKind::Mix => {
            let gram_g = point.gram_g(metric.epsilon);
            let gram_h = point.gram_h(metric.epsilon);
            (
                point.g.tr_matmul(&xi.g).matmul(&gram_h),
                gram_g.matmul(&xi.h.tr_matmul(&point.h)),
            )
        }
    };
    let scale = lhs.frobenius_norm().max(rhs.frobenius_norm()).max(1.0);
    lhs.sub(&rhs).frobenius_norm() / scale
}

/// Project a tangent vector onto the horizontal space of the metric.
pub fn project_horizontal(
    metric: &Metric,
    point: &FactorPair,
    xi: &TangentPair,
) -> Result<TangentPair> {
    let lambda = match metric.kind {
        MetricKind::Euclidean => {
            // G^T G L + L H^T H = xi_H^T H - G^T xi_G
            let a = point.gram_g(metric.epsilon);
            let c = point.gram_h(metric.epsilon);
            let b = xi.h.tr_matmul(&point.h).sub(&point.g.tr_matmul(&xi.g));
            sylvester_general(&a, &c, &b)?
        }
        MetricKind::Inv => {
            // Orthogonality of the projected vector to all verticals under
            // the inv metric reduces to
            //   Hb (G^T G) L + L (H^T H) Gb = xi_H^T H Gb - Hb G^T xi_G,
            // solved for L and applied as (xi_G + G L, xi_H - H L^T).
            let gram_g = point.gram_g(metric.epsilon);
            let gram_h = point.gram_h(metric.epsilon);
            let a = gram_h.matmul(&point.g.gram());
            let c = point.h.gram().matmul(&gram_g);
            let b =
                xi.h.tr_matmul(&point.h)
                    .matmul(&gram_g)
                    .sub(&gram_h.matmul(&point.g.tr_matmul(&xi.g)));
            sylvester_general(&a, &c, &b)?
        }
        MetricKind::Mix => {
            // L = (xi_H^T H Hb^-1 - Gb^-1 G^T xi_G) / 2
            let gram_g_inv = point.gram_g(metric.epsilon).inverse().map_err(|_| {
                crate::error::Error::SingularGram {
                    context: "mix projection G",
                }
            })?;
            let gram_h_inv = point.gram_h(metric.epsilon).inverse().map_err(|_| {
                crate::error::Error::SingularGram {
                    context: "mix projection H",
                }
            })?;
            xi.h.tr_matmul(&point.h)
                .matmul(&gram_h_inv)
                .sub(&gram_g_inv.matmul(&point.g.tr_matmul(&xi.g)))
                .scale(0.5)
        }
    };
    Ok(TangentPair::new(
        xi.g.add(&point.g.matmul(&lambda)),
        xi.h.sub(&point.h.matmul_tr(&lambda)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::metric_inner;
    use crate::numerics::SeededRng;

    fn random_point(n: usize, m: usize, h: usize, rng: &mut SeededRng) -> FactorPair {
        let g = DenseMatrix::from_fn(n, h, |i, j| rng.normal() + if i == j { 2.0 } else { 0.0 });
        let hm = DenseMatrix::from_fn(m, h, |i, j| rng.normal() + if i == j { 2.0 } else { 0.0 });
        FactorPair::new(g, hm)
    }

    fn random_tangent(point: &FactorPair, rng: &mut SeededRng) -> TangentPair {
        TangentPair::new(
            DenseMatrix::from_fn(point.g.rows(), point.g.cols(), |_, _| rng.normal()),
            DenseMatrix::from_fn(point.h.rows(), point.h.cols(), |_, _| rng.normal()),
        )
    }

    #[test]
    fn vertical_generator_examples() {
        let p = FactorPair::scalar(1.0, 1.0);
        let zero = vertical_generator(&p, &DenseMatrix::scalar(0.0));
        assert_eq!(zero.euclidean_norm(), 0.0);
        let v = vertical_generator(&p, &DenseMatrix::scalar(1.0));
        assert_eq!((v.g[(0, 0)], v.h[(0, 0)]), (-1.0, 1.0));
    }

    #[test]
    fn scalar_inv_projection_annihilates_vertical() {
        let p = FactorPair::scalar(1.0, 1.0);
        let vertical = TangentPair::scalar(1.0, -1.0);
        let out = project_horizontal(&Metric::inv(), &p, &vertical).unwrap();
        assert!(out.euclidean_norm() < 1e-14);
    }

    #[test]
    fn scalar_inv_projection_keeps_horizontal() {
        let p = FactorPair::scalar(1.0, 1.0);
        let horizontal = TangentPair::scalar(1.0, 1.0);
        let out = project_horizontal(&Metric::inv(), &p, &horizontal).unwrap();
        assert!(out.sub(&horizontal).euclidean_norm() < 1e-14);
    }

    #[test]
    fn scalar_mix_closed_form_lambda_zero() {
        // (G, H) = (2, 3), xi = (2, 3): Lambda = (3*3/9 - (1/4)*2*2) / 2 = 0.
        let p = FactorPair::scalar(2.0, 3.0);
        let xi = TangentPair::scalar(2.0, 3.0);
        let out = project_horizontal(&Metric::mix(), &p, &xi).unwrap();
        assert!(out.sub(&xi).euclidean_norm() < 1e-14);
        assert!(horizontality_residual(&Metric::mix(), &p, &out) < 1e-14);
    }

    #[test]
    fn projection_is_idempotent_and_annihilates_verticals() {
        let mut rng = SeededRng::new(7, 0);
        for metric in [Metric::inv(), Metric::mix(), Metric::euclidean()] {
            for h in [1usize, 2, 4] {
                for _ in 0..5 {
                    let p = random_point(h + 3, h + 2, h, &mut rng);
                    let xi = random_tangent(&p, &mut rng);
                    let once = project_horizontal(&metric, &p, &xi).unwrap();
                    assert!(
                        horizontality_residual(&metric, &p, &once) <= 1e-8,
                        "{:?} h={h}",
                        metric.kind
                    );
                    let twice = project_horizontal(&metric, &p, &once).unwrap();
                    let drift = twice.sub(&once).euclidean_norm() / once.euclidean_norm().max(1.0);
                    assert!(drift <= 1e-10, "{:?} h={h} drift {drift}", metric.kind);

                    let e = DenseMatrix::from_fn(h, h, |_, _| rng.normal());
                    let vertical = vertical_generator(&p, &e);
                    let killed = project_horizontal(&metric, &p, &vertical).unwrap();
                    assert!(
                        killed.euclidean_norm() / vertical.euclidean_norm().max(1.0) <= 1e-10,
                        "{:?} h={h}",
                        metric.kind
                    );
                    // Metric orthogonality of the output to any vertical.
                    let ip = metric_inner(&metric, &p, &once, &vertical).unwrap();
                    let norms = metric_inner(&metric, &p, &once, &once).unwrap().sqrt()
                        * metric_inner(&metric, &p, &vertical, &vertical)
                            .unwrap()
                            .sqrt();
                    assert!(
                        ip.abs() <= 1e-10 * norms.max(1.0),
                        "{:?} h={h}",
                        metric.kind
                    );
                }
            }
        }
    }

    #[test]
    fn projection_ignores_metric_scale() {
        let mut rng = SeededRng::new(8, 0);
        let p = random_point(5, 4, 2, &mut rng);
        let xi = random_tangent(&p, &mut rng);
        for metric in [Metric::inv(), Metric::mix()] {
            let base = project_horizontal(&metric, &p, &xi).unwrap();
            for c in [0.1, 7.0] {
                let scaled = project_horizontal(&metric.with_scale(c), &p, &xi).unwrap();
                assert!(scaled.sub(&base).euclidean_norm() <= 1e-12);
            }
        }
    }
}
