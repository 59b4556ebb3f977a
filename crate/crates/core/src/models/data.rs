//! Synthetic data generation.

use crate::error::{Error, Result};
use crate::models::{ClassificationBatch, RegressionData};
use crate::numerics::{thin_qr, DenseMatrix, SeededRng};

/// Sparse linear regression: `X` has i.i.d. standard normal entries,
/// `beta*` has exactly `round(sparsity * d)` zero coordinates (support
/// chosen uniformly, nonzeros standard normal), and
/// `y = X beta* + noise * eps` with standard normal `eps`.
pub fn generate_sparse_regression(
    n: usize,
    d: usize,
    sparsity: f64,
    noise: f64,
    rng: &mut SeededRng,
) -> RegressionData {
    assert!(n >= 1 && d >= 1, "dimensions must be positive");
    assert!((0.0..1.0).contains(&sparsity), "sparsity must be in [0, 1)");
    let x = DenseMatrix::from_fn(n, d, |_, _| rng.normal());
    let beta_star = sparse_ground_truth(d, sparsity, rng);
    let mut y = x.matvec(&beta_star);
    if noise != 0.0 {
        for yi in &mut y {
            *yi += noise * rng.normal();
        }
    }
    RegressionData::new(x, y, Some(beta_star))
}

/// Whitened regression: `X` is the Q-factor of a Gaussian n x d matrix,
/// so `X^T X = I_d` up to roundoff; labels are noiseless.
pub fn generate_whitened_regression(
    n: usize,
    d: usize,
    sparsity: f64,
    rng: &mut SeededRng,
) -> Result<RegressionData> {
    if n < d {
        return Err(Error::Precondition(format!(
            "whitened design needs n >= d, got n={n}, d={d}"
        )));
    }
    let gaussian = DenseMatrix::from_fn(n, d, |_, _| rng.normal());
    let x = thin_qr(&gaussian);
    let beta_star = sparse_ground_truth(d, sparsity, rng);
    let y = x.matvec(&beta_star);
    Ok(RegressionData::new(x, y, Some(beta_star)))
}

fn sparse_ground_truth(d: usize, sparsity: f64, rng: &mut SeededRng) -> Vec<f64> {
    let zeros = (sparsity * d as f64).round() as usize;
    let mut beta: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
    // Fisher-Yates permutation picks the zeroed coordinates uniformly.
    let mut order: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = rng.index(i + 1);
        order.swap(i, j);
    }
    for &i in order.iter().take(zeros) {
        beta[i] = 0.0;
    }
    beta
}

/// A synthetic classification batch: standard normal inputs, uniform
/// labels.
pub fn generate_classification_batch(
    n: usize,
    d_in: usize,
    d_out: usize,
    rng: &mut SeededRng,
) -> ClassificationBatch {
    assert!(n >= 1 && d_in >= 1 && d_out >= 2);
    ClassificationBatch::new(
        DenseMatrix::from_fn(n, d_in, |_, _| rng.normal()),
        (0..n).map(|_| rng.index(d_out)).collect(),
    )
}
