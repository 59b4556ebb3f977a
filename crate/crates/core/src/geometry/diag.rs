//! Per-coordinate (diagonal) specializations.
//!
//! A diagonal network is d independent 1 x 1 factor pairs `(u_i, v_i)`.
//! The horizontal space is `{ xi : xi_u / u = xi_v / v }` for both
//! quotient metrics, and geodesics are known in closed form in terms of
//! the per-coordinate exponent `B_i = xi_u^i / u_i = xi_v^i / v_i`:
//!
//! - inv: `(u_i e^{B_i t}, v_i e^{B_i t})`
//! - mix: `(u_i sqrt(1 + 2 B_i t), v_i sqrt(1 + 2 B_i t))`

use crate::error::{Error, Result};
use crate::geometry::MetricKind;

/// Tangent tuple for diagonal parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalTangent {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl DiagonalTangent {
    pub fn zeros(d: usize) -> Self {
        Self {
            u: vec![0.0; d],
            v: vec![0.0; d],
        }
    }
}

/// Project `(xi_u, xi_v)` onto the horizontal space at `(u, v)`.
///
/// The inv and mix projections coincide at h = 1; per coordinate the
/// multiplier is `lambda_i = xi_v^i / (2 v_i) - xi_u^i / (2 u_i)` and the
/// projected vector is `(xi_u + u lambda, xi_v - v lambda)`.
pub fn project_horizontal_diag(
    u: &[f64],
    v: &[f64],
    xi_u: &[f64],
    xi_v: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(u.len(), v.len());
    assert_eq!(xi_u.len(), u.len());
    assert_eq!(xi_v.len(), u.len());
    let mut out_u = Vec::with_capacity(u.len());
    let mut out_v = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        let lambda = xi_v[i] / (2.0 * v[i]) - xi_u[i] / (2.0 * u[i]);
        out_u.push(xi_u[i] + u[i] * lambda);
        out_v.push(xi_v[i] - v[i] * lambda);
    }
    (out_u, out_v)
}

/// Exact geodesic for diagonal parameters with horizontal exponent `b`.
///
/// The mix geodesic requires `1 + 2 b_i t > 0` for every coordinate.
pub fn exact_geodesic_diagonal(
    kind: MetricKind,
    u0: &[f64],
    v0: &[f64],
    b: &[f64],
    t: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(u0.len(), v0.len());
    assert_eq!(b.len(), u0.len());
    match kind {
        MetricKind::Inv => {
            let u = u0
                .iter()
                .zip(b)
                .map(|(&u, &bi)| u * (bi * t).exp())
                .collect();
            let v = v0
                .iter()
                .zip(b)
                .map(|(&v, &bi)| v * (bi * t).exp())
                .collect();
            Ok((u, v))
        }
        MetricKind::Mix => {
            let mut u = Vec::with_capacity(u0.len());
            let mut v = Vec::with_capacity(v0.len());
            for i in 0..u0.len() {
                let radicand = 1.0 + 2.0 * b[i] * t;
                if radicand <= 0.0 {
                    return Err(Error::MixDomain {
                        index: i,
                        value: radicand,
                    });
                }
                let root = radicand.sqrt();
                u.push(u0[i] * root);
                v.push(v0[i] * root);
            }
            Ok((u, v))
        }
        MetricKind::Euclidean => Err(Error::UnsupportedMetric {
            op: "exact_geodesic_diagonal",
            metric: "euclidean",
        }),
    }
}
