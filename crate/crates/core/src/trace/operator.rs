//! Matrix-free linear operators.

use std::sync::atomic::{AtomicUsize, Ordering};

/// A square linear map accessed only through vector products.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
}

/// Operator from a closure.
pub struct FnOperator<F: Fn(&[f64]) -> Vec<f64> + Sync> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Vec<f64> + Sync> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64> + Sync> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "operator input dimension mismatch");
        let out = (self.f)(x);
        assert_eq!(out.len(), self.dim, "operator output dimension mismatch");
        out
    }
}

/// Wrapper counting `apply` invocations; used to verify the
/// matrix-vector-product accounting of the estimators.
pub struct CountingOperator<'a> {
    inner: &'a dyn LinearOperator,
    count: AtomicUsize,
}

impl<'a> CountingOperator<'a> {
    pub fn new(inner: &'a dyn LinearOperator) -> Self {
        Self {
            inner,
            count: AtomicUsize::new(0),
        }
    }

    pub fn count(&self) -> usize {
        self.count.load(Ordering::Relaxed)
    }
}

impl LinearOperator for CountingOperator<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.apply(x)
    }
}
