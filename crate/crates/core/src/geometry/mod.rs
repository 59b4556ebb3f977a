//! Quotient-manifold geometry for GL(h)-symmetric factor pairs.
//!
//! A point is a pair `(G, H)` of full-column-rank factors; the group acts
//! by `psi(A, (G, H)) = (G A^-1, H A^T)`, which leaves any function of
//! `G H^T` unchanged. Two symmetry-compatible metrics are supported next
//! to the Euclidean one:
//!
//! - `Inv`:  <xi, zeta> = Tr((G^T G)^-1 xi_G^T zeta_G + (H^T H)^-1 xi_H^T zeta_H)
//! - `Mix`:  <xi, zeta> = Tr((H^T H) xi_G^T zeta_G + (G^T G) xi_H^T zeta_H)
//!
//! Directions along the orbit (the vertical space) change nothing
//! functionally; their metric-orthogonal complement (the horizontal
//! space) represents quotient tangent vectors concretely. This module
//! provides the projection onto the horizontal space, the Christoffel
//! quadratic form entering second-order geodesic steps, exact geodesics
//! for per-coordinate (diagonal) parameters, and the corrected Riemannian
//! Hessian-vector product.

mod diag;
mod geodesic;
mod hessian;
mod metric;
mod projection;

pub use diag::{exact_geodesic_diagonal, project_horizontal_diag, DiagonalTangent};
pub use geodesic::{
    christoffel_quadratic, christoffel_quadratic_unchecked, geodesic_step,
    geodesic_step_with_acceleration, HORIZONTALITY_TOLERANCE,
};
pub use hessian::riemannian_hvp;
pub use metric::{metric_inner, metric_norm, riemannian_gradient};
pub use projection::{horizontality_residual, project_horizontal, vertical_generator};

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

/// Which geometry is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Euclidean,
    /// Inverse-Gram weighting of each factor's tangent block.
    Inv,
    /// Crossed-Gram weighting: each block weighted by the other factor's Gram.
    Mix,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Euclidean => "euclidean",
            MetricKind::Inv => "inv",
            MetricKind::Mix => "mix",
        }
    }
}

/// A metric kind plus its Gram relaxation and an overall scale.
///
/// `epsilon` is added to every Gram matrix before inversion, guarding
/// near-rank-deficient factors. `scale` multiplies the inner product;
/// geodesics, projections, and Christoffel terms are invariant to it, and
/// the implementation keeps them so by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub kind: MetricKind,
    pub epsilon: f64,
    pub scale: f64,
}

impl Metric {
    pub fn new(kind: MetricKind) -> Self {
        Self {
            kind,
            epsilon: 0.0,
            scale: 1.0,
        }
    }

    pub fn euclidean() -> Self {
        Self::new(MetricKind::Euclidean)
    }

    pub fn inv() -> Self {
        Self::new(MetricKind::Inv)
    }

    pub fn mix() -> Self {
        Self::new(MetricKind::Mix)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        assert!(epsilon >= 0.0, "epsilon must be nonnegative");
        self.epsilon = epsilon;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        assert!(scale > 0.0, "metric scale must be positive");
        self.scale = scale;
        self
    }
}

/// A point on the total space: factors `G` (n x h) and `H` (m x h).
///
/// For the scalar model n = m = h = 1 with `G = theta_2`, `H = theta_1`;
/// the shallow linear net maps in as `G = W2`, `H = W1^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub g: DenseMatrix,
    pub h: DenseMatrix,
}

impl FactorPair {
    pub fn new(g: DenseMatrix, h: DenseMatrix) -> Self {
        assert_eq!(g.cols(), h.cols(), "factor pair rank mismatch");
        Self { g, h }
    }

    pub fn scalar(g: f64, h: f64) -> Self {
        Self::new(DenseMatrix::scalar(g), DenseMatrix::scalar(h))
    }

    /// Shared column count h.
    pub fn rank(&self) -> usize {
        self.g.cols()
    }

    /// Relaxed Gram `G^T G + eps I`.
    pub fn gram_g(&self, epsilon: f64) -> DenseMatrix {
        self.g.gram().add_diag(epsilon)
    }

    /// Relaxed Gram `H^T H + eps I`.
    pub fn gram_h(&self, epsilon: f64) -> DenseMatrix {
        self.h.gram().add_diag(epsilon)
    }

    /// Apply the group action `psi(A, (G, H)) = (G A^-1, H A^T)`.
    pub fn group_action(&self, a: &DenseMatrix) -> Result<FactorPair> {
        let h = self.rank();
        assert_eq!(a.shape(), (h, h), "group element must be h x h");
        let (a_inv, cond) = a
            .lu_solve(&DenseMatrix::identity(h))
            .map_err(|_| Error::SingularGroupElement)?;
        if cond > 1e12 {
            return Err(Error::SingularGroupElement);
        }
        Ok(FactorPair::new(self.g.matmul(&a_inv), self.h.matmul_tr(a)))
    }

    pub fn total_dim(&self) -> usize {
        self.g.rows() * self.g.cols() + self.h.rows() * self.h.cols()
    }
}

/// A tangent vector at a [`FactorPair`], stored as the matrix tuple
/// `(xi_G, xi_H)` with the same shapes as the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentPair {
    pub g: DenseMatrix,
    pub h: DenseMatrix,
}

impl TangentPair {
    pub fn new(g: DenseMatrix, h: DenseMatrix) -> Self {
        Self { g, h }
    }

    pub fn scalar(g: f64, h: f64) -> Self {
        Self::new(DenseMatrix::scalar(g), DenseMatrix::scalar(h))
    }

    pub fn zeros_like(point: &FactorPair) -> Self {
        Self {
            g: DenseMatrix::zeros(point.g.rows(), point.g.cols()),
            h: DenseMatrix::zeros(point.h.rows(), point.h.cols()),
        }
    }

    pub fn add(&self, other: &TangentPair) -> TangentPair {
        TangentPair::new(self.g.add(&other.g), self.h.add(&other.h))
    }

    pub fn sub(&self, other: &TangentPair) -> TangentPair {
        TangentPair::new(self.g.sub(&other.g), self.h.sub(&other.h))
    }

    pub fn scale(&self, s: f64) -> TangentPair {
        TangentPair::new(self.g.scale(s), self.h.scale(s))
    }

    /// Euclidean (Frobenius) inner product of two tangent tuples.
    pub fn euclidean_inner(&self, other: &TangentPair) -> f64 {
        self.g.inner(&other.g) + self.h.inner(&other.h)
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.euclidean_inner(self).sqrt()
    }
}

/// A curve `alpha -> psi(alpha A, x)` through the orbit of `base`.
///
/// The loss of any GL-symmetric function is constant along the curve.
#[derive(Debug, Clone)]
pub struct OrbitCurve {
    pub base: FactorPair,
    pub a: DenseMatrix,
}

impl OrbitCurve {
    pub fn new(base: FactorPair, a: DenseMatrix) -> Self {
        assert_eq!(a.rows(), a.cols(), "orbit matrix must be square");
        assert_eq!(a.rows(), base.rank(), "orbit matrix rank mismatch");
        Self { base, a }
    }

    /// The point at parameter `alpha != 0`.
    pub fn point(&self, alpha: f64) -> Result<FactorPair> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::ZeroAlpha);
        }
        self.base.group_action(&self.a.scale(alpha))
    }
}

/// Convenience alias matching the operation vocabulary.
pub fn group_action(point: &FactorPair, a: &DenseMatrix) -> Result<FactorPair> {
    point.group_action(a)
}

/// Convenience alias matching the operation vocabulary.
pub fn orbit_point(curve: &OrbitCurve, alpha: f64) -> Result<FactorPair> {
    curve.point(alpha)
}
