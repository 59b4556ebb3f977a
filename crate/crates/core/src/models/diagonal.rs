//! Diagonal linear networks: predictors `y = x^T (u . v)` with the
//! unnormalized squared loss `L(u, v) = ||X (u . v) - y||_2^2`.
//!
//! The model is invariant under per-coordinate rescaling
//! `(u_i, v_i) -> (a u_i, v_i / a)`, which leaves `beta = u . v`
//! unchanged.

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalParams {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl DiagonalParams {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Self {
        assert_eq!(u.len(), v.len(), "u and v must have equal length");
        Self { u, v }
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// The effective predictor `beta = u . v`.
    pub fn beta(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(&u, &v)| u * v).collect()
    }

    /// Flattened parameter vector in `(u, then v)` order.
    pub fn flatten(&self) -> Vec<f64> {
        let mut w = self.u.clone();
        w.extend_from_slice(&self.v);
        w
    }

    pub fn from_flat(w: &[f64]) -> Self {
        assert!(
            w.len().is_multiple_of(2),
            "flattened diagonal params must have even length"
        );
        let d = w.len() / 2;
        Self::new(w[..d].to_vec(), w[d..].to_vec())
    }
}

/// Regression data; `beta_star` carries the generating ground truth when
/// one exists.
#[derive(Debug, Clone)]
pub struct RegressionData {
    pub x: DenseMatrix,
    pub y: Vec<f64>,
    pub beta_star: Option<Vec<f64>>,
}

impl RegressionData {
    pub fn new(x: DenseMatrix, y: Vec<f64>, beta_star: Option<Vec<f64>>) -> Self {
        assert_eq!(x.rows(), y.len(), "row count must match label count");
        if let Some(b) = &beta_star {
            assert_eq!(b.len(), x.cols(), "ground truth dimension mismatch");
        }
        Self { x, y, beta_star }
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn d(&self) -> usize {
        self.x.cols()
    }

    /// `||X^T X - I||_max`; zero for whitened designs.
    pub fn whiteness_residual(&self) -> f64 {
        let d = self.d();
        self.x.gram().sub(&DenseMatrix::identity(d)).max_abs()
    }
}

fn check_shapes(p: &DiagonalParams, data: &RegressionData) -> Result<()> {
    if p.dim() != data.d() {
        return Err(Error::ShapeMismatch(format!(
            "diagonal params dimension {} vs data dimension {}",
            p.dim(),
            data.d()
        )));
    }
    Ok(())
}

/// `||X (u . v) - y||_2^2`
pub fn diagonal_loss(p: &DiagonalParams, data: &RegressionData) -> Result<f64> {
    check_shapes(p, data)?;
    let beta = p.beta();
    let pred = data.x.matvec(&beta);
    Ok(pred
        .iter()
        .zip(&data.y)
        .map(|(&p, &y)| (p - y) * (p - y))
        .sum())
}

/// Euclidean gradient `(g_u, g_v) = (2 v . X^T r, 2 u . X^T r)` with
/// residual `r = X beta - y`.
pub fn diagonal_grad(p: &DiagonalParams, data: &RegressionData) -> Result<(Vec<f64>, Vec<f64>)> {
    check_shapes(p, data)?;
    let beta = p.beta();
    let mut r = data.x.matvec(&beta);
    for (ri, &yi) in r.iter_mut().zip(&data.y) {
        *ri -= yi;
    }
    let xtr = data.x.tr_matvec(&r);
    let g_u: Vec<f64> = p.v.iter().zip(&xtr).map(|(&v, &t)| 2.0 * v * t).collect();
    let g_v: Vec<f64> = p.u.iter().zip(&xtr).map(|(&u, &t)| 2.0 * u * t).collect();
    Ok((g_u, g_v))
}

/// The loss Hessian at a global minimum with whitened data, in `(u, v)`
/// flattening order:
///
/// ```text
/// 2 [ diag(v . v)  diag(u . v) ]
///   [ diag(u . v)  diag(u . u) ]
/// ```
///
/// The leading 2 comes from the unnormalized squared loss. Requires
/// `X^T X = I` within 1e-10 and a gradient norm at `p` below 1e-6; away
/// from minima the formula does not hold and finite differences or HVPs
/// must be used instead.
pub fn diagonal_hessian_at_min(p: &DiagonalParams, data: &RegressionData) -> Result<DenseMatrix> {
    check_shapes(p, data)?;
    let white = data.whiteness_residual();
    if white > 1e-10 {
        return Err(Error::Precondition(format!(
            "data not whitened: ||X^T X - I|| = {white:.3e}"
        )));
    }
    let (g_u, g_v) = diagonal_grad(p, data)?;
    let gnorm = g_u.iter().chain(&g_v).map(|g| g * g).sum::<f64>().sqrt();
    if gnorm > 1e-6 {
        return Err(Error::Precondition(format!(
            "not at a minimum: gradient norm {gnorm:.3e}"
        )));
    }
    let d = p.dim();
    let mut h = DenseMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        h[(i, i)] = 2.0 * p.v[i] * p.v[i];
        h[(d + i, d + i)] = 2.0 * p.u[i] * p.u[i];
        h[(i, d + i)] = 2.0 * p.u[i] * p.v[i];
        h[(d + i, i)] = 2.0 * p.u[i] * p.v[i];
    }
    Ok(h)
}
