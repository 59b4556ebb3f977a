//! Exact and stochastic trace estimation of matrix-free linear operators,
//! and orbit sweeps comparing Euclidean against Riemannian Hessian traces.

mod estimators;
mod operator;
mod sweep;

pub use estimators::{exact_trace, hutchinson, hutchpp, relative_error, TraceEstimate};
pub use operator::{CountingOperator, FnOperator, LinearOperator};
pub use sweep::{
    euclidean_hessian_operator, operator_spectrum, orbit_trace_sweep, riemannian_hessian_operator,
    EstimatorKind, SpectrumResult, SweepCell,
};
