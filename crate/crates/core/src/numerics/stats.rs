//! Rank statistics.

use crate::error::{Error, Result};

/// Kendall rank correlation (tau-a): pairwise sign concordance,
/// `tau = 2 / (M (M-1)) * sum_{i<j} sign(t_i - t_j) * sign(s_i - s_j)`.
///
/// Ties contribute zero through `sign(0) = 0`; no tie correction is
/// applied. O(M^2) pair enumeration.
pub fn kendall_tau(t: &[f64], s: &[f64]) -> Result<f64> {
    if t.len() != s.len() {
        return Err(Error::ShapeMismatch(format!(
            "kendall_tau length mismatch: {} vs {}",
            t.len(),
            s.len()
        )));
    }
    let m = t.len();
    if m < 2 {
        return Err(Error::Precondition(
            "kendall_tau needs at least two observations".into(),
        ));
    }
    let mut acc = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            acc += sign(t[i] - t[j]) * sign(s[i] - s[j]);
        }
    }
    Ok(2.0 * acc / (m as f64 * (m as f64 - 1.0)))
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
