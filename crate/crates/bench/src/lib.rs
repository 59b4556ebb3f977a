//! Shared fixtures for the criterion benchmarks.

use geosharp::models::{generate_classification_batch, ClassificationBatch, MatrixNetParams};
use geosharp::{DenseMatrix, SeededRng};

/// A matrix net and batch at the trace-experiment scale.
pub fn trace_fixture(d_in: usize) -> (MatrixNetParams, ClassificationBatch) {
    let mut rng = SeededRng::new(0xBE9C, 0);
    let h = 2;
    let d_out = 10;
    let s1 = 1.0 / (d_in as f64).sqrt();
    let s2 = 1.0 / (h as f64).sqrt();
    let params = MatrixNetParams::new(
        DenseMatrix::from_fn(h, d_in, |_, _| s1 * rng.normal()),
        DenseMatrix::from_fn(d_out, h, |_, _| s2 * rng.normal()),
    );
    let batch = generate_classification_batch(128, d_in, d_out, &mut rng);
    (params, batch)
}

/// A random full-rank factor pair with a raw tangent vector.
pub fn factor_fixture(
    n: usize,
    m: usize,
    h: usize,
) -> (geosharp::FactorPair, geosharp::TangentPair) {
    let mut rng = SeededRng::new(0xFAC7, 0);
    let g = DenseMatrix::from_fn(n, h, |i, j| rng.normal() + if i == j { 2.0 } else { 0.0 });
    let hm = DenseMatrix::from_fn(m, h, |i, j| rng.normal() + if i == j { 2.0 } else { 0.0 });
    let xi = geosharp::TangentPair::new(
        DenseMatrix::from_fn(n, h, |_, _| rng.normal()),
        DenseMatrix::from_fn(m, h, |_, _| rng.normal()),
    );
    (geosharp::FactorPair::new(g, hm), xi)
}
