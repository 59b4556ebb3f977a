//! Exact, Hutchinson, and Hutch++ trace estimation.

use crate::error::{Error, Result};
use crate::numerics::{dot, thin_qr, DenseMatrix, SeededRng};
use crate::trace::LinearOperator;

/// A stochastic trace estimate with its sample spread and
/// matrix-vector-product accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEstimate {
    pub mean: f64,
    /// Sample standard deviation of the per-probe estimates.
    pub std: f64,
    pub n_probes: usize,
    /// Total vector products consumed, including setup.
    pub mvp_count: usize,
    /// Per-probe estimates (deflated for Hutch++, raw for Hutchinson).
    pub probes: Vec<f64>,
    /// Trace captured exactly by the sketch; zero for plain Hutchinson.
    pub sketched_part: f64,
    /// Vector products spent before the first probe.
    pub setup_mvps: usize,
}

impl TraceEstimate {
    /// Standard deviation of the mean, `std / sqrt(n_probes)`.
    pub fn std_of_mean(&self) -> f64 {
        if self.n_probes == 0 {
            0.0
        } else {
            self.std / (self.n_probes as f64).sqrt()
        }
    }

    /// The estimate available after `mvps` vector products: the sketched
    /// part plus the running mean of the probes consumed so far. `None`
    /// while the sketch is still being built.
    pub fn prefix_estimate(&self, mvps: usize) -> Option<f64> {
        if mvps <= self.setup_mvps || self.probes.is_empty() {
            return None;
        }
        let used = (mvps - self.setup_mvps).min(self.probes.len());
        let mean: f64 = self.probes[..used].iter().sum::<f64>() / used as f64;
        Some(self.sketched_part + mean)
    }
}

fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean: f64 = values.iter().sum::<f64>() / n as f64;
    let var: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
    var.max(0.0).sqrt()
}

/// Exact trace via products with the unit vectors; costs `dim` products.
pub fn exact_trace(op: &dyn LinearOperator) -> f64 {
    let d = op.dim();
    let mut basis = vec![0.0; d];
    let mut total = 0.0;
    for i in 0..d {
        basis[i] = 1.0;
        total += op.apply(&basis)[i];
        basis[i] = 0.0;
    }
    total
}

/// Vanilla Hutchinson estimation with Rademacher probes: the mean of
/// `x^T (op x)` over `budget` draws. Unbiased for the exact trace.
pub fn hutchinson(op: &dyn LinearOperator, budget: usize, rng: &mut SeededRng) -> TraceEstimate {
    assert!(budget >= 1, "budget must be positive");
    let d = op.dim();
    let mut probes = Vec::with_capacity(budget);
    for _ in 0..budget {
        let x: Vec<f64> = (0..d).map(|_| rng.rademacher()).collect();
        probes.push(dot(&x, &op.apply(&x)));
    }
    let mean = probes.iter().sum::<f64>() / budget as f64;
    TraceEstimate {
        mean,
        std: sample_std(&probes),
        n_probes: budget,
        mvp_count: budget,
        probes,
        sketched_part: 0.0,
        setup_mvps: 0,
    }
}

/// Hutch++: an exact low-rank sketched part plus Hutchinson on the
/// deflated remainder.
///
/// The sketch basis `Q` is the thin-QR factor of `op S` for a D x k
/// Rademacher sketch `S` (k products); evaluating `Tr(Q^T op Q)` costs
/// another k; the remaining `budget - 2k` products are Rademacher probes
/// of `(I - QQ^T) op (I - QQ^T)`. With `k = 0` this is exactly
/// Hutchinson on the same random stream.
pub fn hutchpp(
    op: &dyn LinearOperator,
    k: usize,
    budget: usize,
    rng: &mut SeededRng,
) -> Result<TraceEstimate> {
    let d = op.dim();
    if k > d {
        return Err(Error::Precondition(format!(
            "sketch size {k} exceeds operator dimension {d}"
        )));
    }
    if budget < 2 * k + 1 {
        return Err(Error::InsufficientBudget {
            needed: 2 * k + 1,
            got: budget,
        });
    }
    // Sketch: S is D x k Rademacher, column by column.
    let mut sketch = DenseMatrix::zeros(d, k);
    for j in 0..k {
        for i in 0..d {
            sketch[(i, j)] = rng.rademacher();
        }
    }
    // Y = op S, one product per column.
    let mut y = DenseMatrix::zeros(d, k);
    for j in 0..k {
        let col: Vec<f64> = (0..d).map(|i| sketch[(i, j)]).collect();
        let out = op.apply(&col);
        for i in 0..d {
            y[(i, j)] = out[i];
        }
    }
    let q = thin_qr(&y);
    // Exact part Tr(Q^T op Q), one product per column of Q.
    let mut sketched_part = 0.0;
    for j in 0..k {
        let col: Vec<f64> = (0..d).map(|i| q[(i, j)]).collect();
        let out = op.apply(&col);
        sketched_part += dot(&col, &out);
    }
    // Deflated probes.
    let n_probes = budget - 2 * k;
    let mut probes = Vec::with_capacity(n_probes);
    for _ in 0..n_probes {
        let g: Vec<f64> = (0..d).map(|_| rng.rademacher()).collect();
        let z = deflate(&q, &g);
        let w = op.apply(&z);
        let w_defl = deflate(&q, &w);
        probes.push(dot(&z, &w_defl));
    }
    let mean = sketched_part + probes.iter().sum::<f64>() / n_probes as f64;
    Ok(TraceEstimate {
        mean,
        std: sample_std(&probes),
        n_probes,
        mvp_count: budget,
        probes,
        sketched_part,
        setup_mvps: 2 * k,
    })
}

/// `x - Q Q^T x`
fn deflate(q: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    if q.cols() == 0 {
        return x.to_vec();
    }
    let coeffs = q.tr_matvec(x);
    let back = q.matvec(&coeffs);
    x.iter().zip(&back).map(|(&a, &b)| a - b).collect()
}

/// `|T - That| / |T|`
pub fn relative_error(exact: f64, estimate: f64) -> Result<f64> {
    if exact == 0.0 {
        return Err(Error::DivisionByZero("relative_error"));
    }
    Ok((exact - estimate).abs() / exact.abs())
}
