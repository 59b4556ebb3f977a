//! Symmetry-corrected geometry for neural-network parameter spaces with
//! GL(h) rescale symmetry.
//!
//! A function of two factor matrices that only depends on the product
//! `G * H^T` is invariant under `(G, H) -> (G A^-1, H A^T)` for any
//! invertible `A`. This crate treats the parameter space as a Riemannian
//! quotient manifold of such factor pairs and provides:
//!
//! - [`numerics`]: deterministic kernels (Sylvester solves, thin QR,
//!   seeded sampling, Kendall rank correlation);
//! - [`models`]: three analytic model families (scalar two-parameter net,
//!   diagonal linear net, shallow matrix-weight net with softmax
//!   cross-entropy), their derivatives, and symmetry-constraint checks;
//! - [`geometry`]: symmetry-compatible metrics, horizontal projections,
//!   Christoffel corrections, geodesics, and the corrected Riemannian
//!   Hessian-vector product;
//! - [`sharpness`]: worst-case adaptive sharpness and geodesic sharpness
//!   with projected gradient ascent, plus closed-form solutions for the
//!   scalar and diagonal models;
//! - [`trace`]: exact and stochastic (Hutchinson, Hutch++) trace
//!   estimation of matrix-free linear operators along symmetry orbits.

pub mod error;
pub mod geometry;
pub mod models;
pub mod numerics;
pub mod sharpness;
pub mod trace;

pub use error::{Error, Result};
pub use geometry::{FactorPair, Metric, MetricKind, OrbitCurve, TangentPair};
pub use models::{
    ClassificationBatch, DiagonalParams, MatrixNetParams, RegressionData, ScalarParams,
};
pub use numerics::{DenseMatrix, SeededRng};
pub use sharpness::{SharpnessConfig, SharpnessResult};
pub use trace::{LinearOperator, TraceEstimate};
