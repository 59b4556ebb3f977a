//! The scalar two-parameter net `x -> theta2 * theta1 * x` with square
//! loss. Everything is analytically tractable, which makes this model the
//! reference case for the quotient geometry: parameter tuples `(theta2,
//! theta1)` and `(alpha theta2, theta1 / alpha)` represent the same
//! function.
//!
//! Orderings follow the factor-pair correspondence `G = theta2`,
//! `H = theta1`: gradient and Hessian components are reported in
//! `(theta2, theta1)` order.

use crate::geometry::{FactorPair, TangentPair};
use crate::numerics::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarParams {
    /// First-layer weight.
    pub theta1: f64,
    /// Second-layer weight.
    pub theta2: f64,
}

impl ScalarParams {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        Self { theta1, theta2 }
    }

    /// Factor-pair view: `G = theta2`, `H = theta1`. Quotient-geometry
    /// operations require both weights nonzero.
    pub fn to_factor_pair(self) -> FactorPair {
        FactorPair::scalar(self.theta2, self.theta1)
    }

    pub fn from_factor_pair(p: &FactorPair) -> Self {
        Self {
            theta1: p.h[(0, 0)],
            theta2: p.g[(0, 0)],
        }
    }

    /// Apply the group element `alpha`: `(theta1 / alpha, alpha theta2)`.
    pub fn rescaled(self, alpha: f64) -> ScalarParams {
        assert!(alpha != 0.0, "group elements are nonzero");
        ScalarParams::new(self.theta1 / alpha, self.theta2 * alpha)
    }
}

/// Per-datum square loss `(theta2 theta1 x - y)^2`.
pub fn scalar_loss(p: ScalarParams, x: f64, y: f64) -> f64 {
    let r = p.theta2 * p.theta1 * x - y;
    r * r
}

/// Euclidean gradient `(d/d theta2, d/d theta1) = 2x(theta2 theta1 x - y)(theta1, theta2)`.
pub fn scalar_euclidean_grad(p: ScalarParams, x: f64, y: f64) -> (f64, f64) {
    let r = p.theta2 * p.theta1 * x - y;
    (2.0 * x * r * p.theta1, 2.0 * x * r * p.theta2)
}

/// Euclidean Hessian in `(theta2, theta1)` ordering:
/// `2x [[x theta1^2, 2x theta1 theta2 - y], [2x theta1 theta2 - y, x theta2^2]]`.
pub fn scalar_euclidean_hessian(p: ScalarParams, x: f64, y: f64) -> DenseMatrix {
    let off = 2.0 * x * p.theta1 * p.theta2 - y;
    DenseMatrix::from_rows(&[
        vec![2.0 * x * x * p.theta1 * p.theta1, 2.0 * x * off],
        vec![2.0 * x * off, 2.0 * x * x * p.theta2 * p.theta2],
    ])
}

/// Summed loss over a dataset of `(x, y)` pairs.
pub fn scalar_dataset_loss(p: ScalarParams, data: &[(f64, f64)]) -> f64 {
    data.iter().map(|&(x, y)| scalar_loss(p, x, y)).sum()
}

pub fn scalar_dataset_grad(p: ScalarParams, data: &[(f64, f64)]) -> (f64, f64) {
    data.iter().fold((0.0, 0.0), |(g2, g1), &(x, y)| {
        let (d2, d1) = scalar_euclidean_grad(p, x, y);
        (g2 + d2, g1 + d1)
    })
}

pub fn scalar_dataset_hessian(p: ScalarParams, data: &[(f64, f64)]) -> DenseMatrix {
    let mut h = DenseMatrix::zeros(2, 2);
    for &(x, y) in data {
        h.axpy(1.0, &scalar_euclidean_hessian(p, x, y));
    }
    h
}

/// Gradient tuple as a tangent at the factor-pair view.
pub fn scalar_grad_tangent(p: ScalarParams, data: &[(f64, f64)]) -> TangentPair {
    let (g2, g1) = scalar_dataset_grad(p, data);
    TangentPair::scalar(g2, g1)
}
