//! Geodesic sharpness: worst-case loss increase over endpoints of
//! metric-norm-bounded horizontal geodesics.
//!
//! Each ascent iterate is stepped by the metric gradient (evaluated at
//! the perturbed point, transformed with the base point's Grams),
//! projected onto the horizontal space, and rescaled into the rho-ball.
//! Scalar and diagonal models use their exact geodesics; matrix models
//! use the second-order geodesic step.
//!
//! Ball-norm conventions: the measure is only defined up to a constant
//! rescaling of the metric (equivalently of rho), and the closed forms
//! the optimizer is checked against fix different conventions per model
//! family. [`BallNorm`] selects the convention; the defaults match the
//! printed closed forms.

use crate::error::{Error, Result};
use crate::geometry::{
    christoffel_quadratic_unchecked, geodesic_step_with_acceleration, metric_norm,
    project_horizontal, project_horizontal_diag, riemannian_gradient, Metric, MetricKind,
};
use crate::models::{
    matrixnet_grad, matrixnet_loss, ClassificationBatch, DiagonalParams, MatrixNetParams,
    RegressionData, ScalarParams,
};
use crate::numerics::SeededRng;
use crate::sharpness::adaptive::elementwise_space;
use crate::sharpness::{run_auto_pgd, AscentSpace, SharpnessConfig, SharpnessResult};

/// How geodesics are evaluated for per-coordinate (diagonal) parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMode {
    /// Closed-form exponential (inv) or square-root (mix) geodesics.
    Exact,
    /// Second-order expansion with the Christoffel correction.
    SecondOrder,
    /// Straight lines: the Christoffel term forced to zero.
    Straight,
}

/// Which norm bounds the feasible set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallNorm {
    /// The plain metric norm at the base point.
    Metric,
    /// `||B||_2` of the per-coordinate geodesic exponent (the inv-metric
    /// diagonal closed-form convention).
    QuotientExponent,
    /// `2 ||delta||_2` of the first-order predictor change
    /// `delta = v . xi_u + u . xi_v` (the mix-metric diagonal closed-form
    /// convention).
    PredictorDelta,
    /// `||xi ./ |theta|||_2`, the adaptive-sharpness norm; only valid
    /// with [`CurveMode::Straight`], where the measure reduces to
    /// adaptive sharpness exactly.
    ThetaScaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalGeodesicOptions {
    pub kind: MetricKind,
    pub curve: CurveMode,
    pub ball: BallNorm,
    /// Metric whose gradient transform preconditions the ascent steps;
    /// `None` uses `kind`. The choice affects only how the inner
    /// optimizer searches the feasible set, not the measure itself. The
    /// mix transform divides by the squared weights and becomes unusable
    /// at interpolating minima with near-zero coordinates; such callers
    /// precondition with the inv transform instead.
    pub precondition: Option<MetricKind>,
}

impl DiagonalGeodesicOptions {
    /// Inv metric with exact geodesics and the `||B|| <= rho` ball.
    pub fn inv_default() -> Self {
        Self {
            kind: MetricKind::Inv,
            curve: CurveMode::Exact,
            ball: BallNorm::QuotientExponent,
            precondition: None,
        }
    }

    /// Mix metric with exact geodesics and the predictor-delta ball.
    pub fn mix_default() -> Self {
        Self {
            kind: MetricKind::Mix,
            curve: CurveMode::Exact,
            ball: BallNorm::PredictorDelta,
            precondition: None,
        }
    }

    /// Corrections off plus the `|theta|`-scaled norm: exactly adaptive
    /// sharpness.
    pub fn reduction_to_adaptive() -> Self {
        Self {
            kind: MetricKind::Inv,
            curve: CurveMode::Straight,
            ball: BallNorm::ThetaScaled,
            precondition: None,
        }
    }
}

/// Split a flat `(xi_u, xi_v)` perturbation.
fn split(xi: &[f64]) -> (&[f64], &[f64]) {
    let d = xi.len() / 2;
    (&xi[..d], &xi[d..])
}

/// The per-coordinate geodesic exponent of a horizontal tangent,
/// symmetrized for numerical robustness.
fn exponent(u: &[f64], v: &[f64], xi_u: &[f64], xi_v: &[f64]) -> Vec<f64> {
    xi_u.iter()
        .zip(xi_v)
        .zip(u.iter().zip(v))
        .map(|((&xu, &xv), (&ui, &vi))| 0.5 * (xu / ui + xv / vi))
        .collect()
}

/// Perturbed parameters for a horizontal perturbation under the chosen
/// curve mode.
fn perturbed_diag(
    params: &DiagonalParams,
    options: &DiagonalGeodesicOptions,
    xi: &[f64],
) -> Result<DiagonalParams> {
    let (xi_u, xi_v) = split(xi);
    let (u, v) = (&params.u, &params.v);
    match options.curve {
        CurveMode::Straight => Ok(DiagonalParams::new(
            u.iter().zip(xi_u).map(|(&a, &b)| a + b).collect(),
            v.iter().zip(xi_v).map(|(&a, &b)| a + b).collect(),
        )),
        CurveMode::Exact => {
            let b = exponent(u, v, xi_u, xi_v);
            match options.kind {
                MetricKind::Inv => Ok(DiagonalParams::new(
                    u.iter().zip(&b).map(|(&a, &bi)| a * bi.exp()).collect(),
                    v.iter().zip(&b).map(|(&a, &bi)| a * bi.exp()).collect(),
                )),
                MetricKind::Mix => {
                    let mut su = Vec::with_capacity(u.len());
                    for (i, &bi) in b.iter().enumerate() {
                        let radicand = 1.0 + 2.0 * bi;
                        if radicand <= 0.0 {
                            return Err(Error::MixDomain {
                                index: i,
                                value: radicand,
                            });
                        }
                        su.push(radicand.sqrt());
                    }
                    Ok(DiagonalParams::new(
                        u.iter().zip(&su).map(|(&a, &s)| a * s).collect(),
                        v.iter().zip(&su).map(|(&a, &s)| a * s).collect(),
                    ))
                }
                MetricKind::Euclidean => Err(Error::UnsupportedMetric {
                    op: "diagonal geodesic sharpness",
                    metric: "euclidean",
                }),
            }
        }
        CurveMode::SecondOrder => {
            // Per-coordinate Christoffel quadratic forms of the 1 x 1
            // factor pairs.
            let gamma_u: Vec<f64>;
            let gamma_v: Vec<f64>;
            match options.kind {
                MetricKind::Inv => {
                    gamma_u = xi_u.iter().zip(u).map(|(&x, &a)| -x * x / a).collect();
                    gamma_v = xi_v.iter().zip(v).map(|(&x, &a)| -x * x / a).collect();
                }
                MetricKind::Mix => {
                    gamma_u = xi_u
                        .iter()
                        .zip(xi_v)
                        .zip(u.iter().zip(v))
                        .map(|((&xu, &xv), (&ui, &vi))| {
                            2.0 * xu * xv / vi - ui * xv * xv / (vi * vi)
                        })
                        .collect();
                    gamma_v = xi_u
                        .iter()
                        .zip(xi_v)
                        .zip(u.iter().zip(v))
                        .map(|((&xu, &xv), (&ui, &vi))| {
                            2.0 * xv * xu / ui - vi * xu * xu / (ui * ui)
                        })
                        .collect();
                }
                MetricKind::Euclidean => {
                    return Err(Error::UnsupportedMetric {
                        op: "diagonal geodesic sharpness",
                        metric: "euclidean",
                    })
                }
            }
            Ok(DiagonalParams::new(
                u.iter()
                    .zip(xi_u)
                    .zip(&gamma_u)
                    .map(|((&a, &x), &g)| a + x - 0.5 * g)
                    .collect(),
                v.iter()
                    .zip(xi_v)
                    .zip(&gamma_v)
                    .map(|((&a, &x), &g)| a + x - 0.5 * g)
                    .collect(),
            ))
        }
    }
}

fn diag_ball_norm(params: &DiagonalParams, options: &DiagonalGeodesicOptions, xi: &[f64]) -> f64 {
    let (xi_u, xi_v) = split(xi);
    let (u, v) = (&params.u, &params.v);
    match options.ball {
        BallNorm::Metric => match options.kind {
            MetricKind::Inv => xi_u
                .iter()
                .zip(u)
                .map(|(&x, &a)| (x / a) * (x / a))
                .chain(xi_v.iter().zip(v).map(|(&x, &a)| (x / a) * (x / a)))
                .sum::<f64>()
                .sqrt(),
            MetricKind::Mix => xi_u
                .iter()
                .zip(v)
                .map(|(&x, &a)| (x * a) * (x * a))
                .chain(xi_v.iter().zip(u).map(|(&x, &a)| (x * a) * (x * a)))
                .sum::<f64>()
                .sqrt(),
            MetricKind::Euclidean => xi.iter().map(|x| x * x).sum::<f64>().sqrt(),
        },
        BallNorm::QuotientExponent => {
            let b = exponent(u, v, xi_u, xi_v);
            b.iter().map(|x| x * x).sum::<f64>().sqrt()
        }
        BallNorm::PredictorDelta => {
            2.0 * xi_u
                .iter()
                .zip(v)
                .zip(xi_v.iter().zip(u))
                .map(|((&xu, &vi), (&xv, &ui))| {
                    let delta = vi * xu + ui * xv;
                    delta * delta
                })
                .sum::<f64>()
                .sqrt()
        }
        BallNorm::ThetaScaled => {
            let w = params.flatten();
            xi.iter()
                .zip(&w)
                .map(|(&x, &t)| (x / t.abs()) * (x / t.abs()))
                .sum::<f64>()
                .sqrt()
        }
    }
}

/// Worst-case geodesic sharpness of a diagonal net on one batch.
pub fn diagonal_geodesic_sharpness(
    params: &DiagonalParams,
    data: &RegressionData,
    options: &DiagonalGeodesicOptions,
    cfg: &SharpnessConfig,
    rng: &SeededRng,
) -> Result<SharpnessResult> {
    if params.dim() != data.d() {
        return Err(Error::ShapeMismatch(format!(
            "params dimension {} vs data dimension {}",
            params.dim(),
            data.d()
        )));
    }
    if options.ball == BallNorm::ThetaScaled && options.curve == CurveMode::Straight {
        // The reduction theorem: corrections off plus the theta-scaled
        // norm is adaptive sharpness with c = |theta|; assemble the very
        // same elementwise space so the trajectories agree bitwise.
        let w0 = params.flatten();
        let c: Vec<f64> = w0.iter().map(|t| t.abs()).collect();
        let loss =
            move |w: &[f64]| crate::models::diagonal_loss(&DiagonalParams::from_flat(w), data);
        let grad = move |w: &[f64]| {
            let p = DiagonalParams::from_flat(w);
            let (gu, gv) = crate::models::diagonal_grad(&p, data)?;
            let mut g = gu;
            g.extend(gv);
            Ok(g)
        };
        let space = elementwise_space(&loss, &grad, &w0, &c);
        return run_auto_pgd(&space, cfg, rng);
    }
    if options.ball == BallNorm::ThetaScaled {
        return Err(Error::Precondition(
            "the theta-scaled ball is only defined with straight-line curves".into(),
        ));
    }

    let dim = 2 * params.dim();
    let loss_at = |xi: &[f64]| -> Result<f64> {
        let p = perturbed_diag(params, options, xi)?;
        crate::models::diagonal_loss(&p, data)
    };
    let ascent_direction = |xi: &[f64]| -> Result<Vec<f64>> {
        let p = perturbed_diag(params, options, xi)?;
        let (gu, gv) = crate::models::diagonal_grad(&p, data)?;
        // Metric gradient with the base point's Grams.
        let (tu, tv): (Vec<f64>, Vec<f64>) = match options.precondition.unwrap_or(options.kind) {
            MetricKind::Inv => (
                gu.iter().zip(&params.u).map(|(&g, &a)| g * a * a).collect(),
                gv.iter().zip(&params.v).map(|(&g, &a)| g * a * a).collect(),
            ),
            MetricKind::Mix => (
                gu.iter()
                    .zip(&params.v)
                    .map(|(&g, &a)| g / (a * a))
                    .collect(),
                gv.iter()
                    .zip(&params.u)
                    .map(|(&g, &a)| g / (a * a))
                    .collect(),
            ),
            MetricKind::Euclidean => (gu, gv),
        };
        let mut out = tu;
        out.extend(tv);
        Ok(out)
    };
    let project_structure = |xi: &[f64]| -> Vec<f64> {
        let (xi_u, xi_v) = split(xi);
        let (pu, pv) = project_horizontal_diag(&params.u, &params.v, xi_u, xi_v);
        let mut out = pu;
        out.extend(pv);
        out
    };
    let constraint_norm = |xi: &[f64]| -> f64 { diag_ball_norm(params, options, xi) };

    let space = AscentSpace {
        dim,
        loss_at: Box::new(loss_at),
        ascent_direction: Box::new(ascent_direction),
        project_structure: Box::new(project_structure),
        constraint_norm: Box::new(constraint_norm),
    };
    run_auto_pgd(&space, cfg, rng)
}

/// Worst-case geodesic sharpness of the scalar model (inv metric, plain
/// metric ball, exact geodesics) on a dataset of `(x, y)` pairs.
///
/// The scalar model is the d = 1 diagonal model with design column
/// `(x_1, ..., x_n)^T`; the metric-ball convention bounds the coupled
/// exponent by `rho / sqrt(2)`.
pub fn scalar_geodesic_sharpness(
    p: ScalarParams,
    data: &[(f64, f64)],
    cfg: &SharpnessConfig,
    rng: &SeededRng,
) -> Result<SharpnessResult> {
    if p.theta1 == 0.0 || p.theta2 == 0.0 {
        return Err(Error::Precondition(
            "scalar geodesic sharpness needs nonzero weights".into(),
        ));
    }
    let n = data.len();
    let x = crate::numerics::DenseMatrix::from_fn(n, 1, |i, _| data[i].0);
    let y: Vec<f64> = data.iter().map(|&(_, yi)| yi).collect();
    let reg = RegressionData::new(x, y, None);
    let params = DiagonalParams::new(vec![p.theta2], vec![p.theta1]);
    let options = DiagonalGeodesicOptions {
        kind: MetricKind::Inv,
        curve: CurveMode::Exact,
        ball: BallNorm::Metric,
        precondition: None,
    };
    diagonal_geodesic_sharpness(&params, &reg, &options, cfg, rng)
}

/// Worst-case geodesic sharpness of the matrix net: second-order geodesic
/// steps, horizontal projection, metric-norm ball.
pub fn matrixnet_geodesic_sharpness(
    params: &MatrixNetParams,
    batch: &ClassificationBatch,
    metric: Metric,
    cfg: &SharpnessConfig,
    rng: &SeededRng,
) -> Result<SharpnessResult> {
    let point = params.to_factor_pair();
    let dim = params.dim();
    let loss_at = |xi: &[f64]| -> Result<f64> {
        let tangent = params.direction_to_tangent(&params.direction_from_flat(xi));
        let gamma = christoffel_quadratic_unchecked(&metric, &point, &tangent)?;
        let stepped = geodesic_step_with_acceleration(&point, &tangent, &gamma, 1.0);
        matrixnet_loss(&MatrixNetParams::from_factor_pair(&stepped), batch)
    };
    let ascent_direction = |xi: &[f64]| -> Result<Vec<f64>> {
        let tangent = params.direction_to_tangent(&params.direction_from_flat(xi));
        let gamma = christoffel_quadratic_unchecked(&metric, &point, &tangent)?;
        let stepped = geodesic_step_with_acceleration(&point, &tangent, &gamma, 1.0);
        let moved = MatrixNetParams::from_factor_pair(&stepped);
        let egrad = matrixnet_grad(&moved, batch)?;
        let rgrad = riemannian_gradient(&metric, &point, &params.direction_to_tangent(&egrad))?;
        Ok(params.direction_to_flat(&params.direction_from_tangent(&rgrad)))
    };
    let project_structure = |xi: &[f64]| -> Vec<f64> {
        let tangent = params.direction_to_tangent(&params.direction_from_flat(xi));
        let projected =
            project_horizontal(&metric, &point, &tangent).expect("full-rank factors project");
        params.direction_to_flat(&params.direction_from_tangent(&projected))
    };
    let constraint_norm = |xi: &[f64]| -> f64 {
        let tangent = params.direction_to_tangent(&params.direction_from_flat(xi));
        metric_norm(&metric, &point, &tangent).expect("full-rank factors have a metric norm")
    };
    let space = AscentSpace {
        dim,
        loss_at: Box::new(loss_at),
        ascent_direction: Box::new(ascent_direction),
        project_structure: Box::new(project_structure),
        constraint_norm: Box::new(constraint_norm),
    };
    run_auto_pgd(&space, cfg, rng)
}
