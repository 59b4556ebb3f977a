//! Seeded random samplers for probes and group elements.

use crate::numerics::matrix::thin_qr;
use crate::numerics::{DenseMatrix, SeededRng};

/// Vector with independent entries in {-1, +1}.
pub fn sample_rademacher(dim: usize, rng: &mut SeededRng) -> Vec<f64> {
    assert!(dim >= 1, "dimension must be positive");
    (0..dim).map(|_| rng.rademacher()).collect()
}

/// Invertible h x h matrix with eigenvalues drawn uniformly from
/// `[-10, -1] U [1, 10]`.
///
/// Built as `P diag(lambda) P^T` with `P` the Q-factor of a Gaussian
/// matrix, so the spectrum is exactly the sampled one. The matrix is
/// symmetric; only the eigenvalue law is constrained.
pub fn sample_gl_matrix(h: usize, rng: &mut SeededRng) -> DenseMatrix {
    sample_gl_matrix_with_spectrum(h, rng).0
}

/// Like [`sample_gl_matrix`] but also returns the sampled eigenvalues.
pub fn sample_gl_matrix_with_spectrum(h: usize, rng: &mut SeededRng) -> (DenseMatrix, Vec<f64>) {
    assert!(h >= 1, "dimension must be positive");
    let gaussian = DenseMatrix::from_fn(h, h, |_, _| rng.normal());
    let p = thin_qr(&gaussian);
    let lambdas: Vec<f64> = (0..h)
        .map(|_| {
            // Uniform over the union of two length-9 intervals.
            let x = rng.uniform(0.0, 18.0);
            if x < 9.0 {
                -10.0 + x
            } else {
                1.0 + (x - 9.0)
            }
        })
        .collect();
    let scaled = DenseMatrix::from_fn(h, h, |i, j| p[(i, j)] * lambdas[j]);
    (scaled.matmul_tr(&p), lambdas)
}
