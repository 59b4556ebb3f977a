//! Shallow linear network with matrix weights and softmax cross-entropy:
//! `L = (1/N) sum_n ce(W2 W1 x_n, y_n)`.
//!
//! Only the product `W2 W1` enters the logits, so the model carries a
//! GL(h) symmetry with factor-pair correspondence `G = W2`, `H = W1^T`.
//! The Hessian is only ever accessed through vector products.

use crate::error::{Error, Result};
use crate::geometry::{FactorPair, TangentPair};
use crate::numerics::DenseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixNetParams {
    /// First layer, h x D_in.
    pub w1: DenseMatrix,
    /// Second layer, D_out x h.
    pub w2: DenseMatrix,
}

/// A tangent (or gradient) tuple with the shapes of `(W1, W2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixNetDirection {
    pub d_w1: DenseMatrix,
    pub d_w2: DenseMatrix,
}

impl MatrixNetParams {
    pub fn new(w1: DenseMatrix, w2: DenseMatrix) -> Self {
        assert_eq!(w1.rows(), w2.cols(), "hidden dimensions must agree");
        Self { w1, w2 }
    }

    pub fn hidden_dim(&self) -> usize {
        self.w1.rows()
    }

    pub fn d_in(&self) -> usize {
        self.w1.cols()
    }

    pub fn d_out(&self) -> usize {
        self.w2.rows()
    }

    /// Total parameter count `h (D_in + D_out)`.
    pub fn dim(&self) -> usize {
        self.w1.rows() * self.w1.cols() + self.w2.rows() * self.w2.cols()
    }

    /// Factor-pair view `G = W2`, `H = W1^T`.
    pub fn to_factor_pair(&self) -> FactorPair {
        FactorPair::new(self.w2.clone(), self.w1.transpose())
    }

    pub fn from_factor_pair(p: &FactorPair) -> Self {
        Self::new(p.h.transpose(), p.g.clone())
    }

    /// Column-stacked `W1` then column-stacked `W2`.
    pub fn flatten(&self) -> Vec<f64> {
        let mut theta = self.w1.vec_columns();
        theta.extend(self.w2.vec_columns());
        theta
    }

    pub fn unflatten(&self, theta: &[f64]) -> MatrixNetParams {
        let (h, d_in, d_out) = (self.hidden_dim(), self.d_in(), self.d_out());
        assert_eq!(theta.len(), self.dim(), "flattened length mismatch");
        let split = h * d_in;
        MatrixNetParams::new(
            DenseMatrix::from_vec_columns(h, d_in, &theta[..split]),
            DenseMatrix::from_vec_columns(d_out, h, &theta[split..]),
        )
    }

    pub fn direction_to_flat(&self, dir: &MatrixNetDirection) -> Vec<f64> {
        let mut theta = dir.d_w1.vec_columns();
        theta.extend(dir.d_w2.vec_columns());
        theta
    }

    pub fn direction_from_flat(&self, theta: &[f64]) -> MatrixNetDirection {
        let p = self.unflatten(theta);
        MatrixNetDirection {
            d_w1: p.w1,
            d_w2: p.w2,
        }
    }

    /// View a `(W1, W2)` direction as a tangent at the factor pair.
    pub fn direction_to_tangent(&self, dir: &MatrixNetDirection) -> TangentPair {
        TangentPair::new(dir.d_w2.clone(), dir.d_w1.transpose())
    }

    pub fn direction_from_tangent(&self, t: &TangentPair) -> MatrixNetDirection {
        MatrixNetDirection {
            d_w1: t.h.transpose(),
            d_w2: t.g.clone(),
        }
    }
}

/// A classification mini-batch.
#[derive(Debug, Clone)]
pub struct ClassificationBatch {
    /// N x D_in inputs, one example per row.
    pub inputs: DenseMatrix,
    pub labels: Vec<usize>,
}

impl ClassificationBatch {
    pub fn new(inputs: DenseMatrix, labels: Vec<usize>) -> Self {
        assert!(!labels.is_empty(), "batch must be nonempty");
        assert_eq!(inputs.rows(), labels.len(), "inputs/labels length mismatch");
        Self { inputs, labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn check_shapes(p: &MatrixNetParams, batch: &ClassificationBatch) -> Result<()> {
    if batch.inputs.cols() != p.d_in() {
        return Err(Error::ShapeMismatch(format!(
            "batch input width {} vs model D_in {}",
            batch.inputs.cols(),
            p.d_in()
        )));
    }
    if let Some(&bad) = batch.labels.iter().find(|&&l| l >= p.d_out()) {
        return Err(Error::ShapeMismatch(format!(
            "label {bad} out of range for D_out {}",
            p.d_out()
        )));
    }
    Ok(())
}

/// Log-sum-exp with max subtraction.
fn logsumexp(z: &[f64]) -> f64 {
    let m = z.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    m + z.iter().map(|&zi| (zi - m).exp()).sum::<f64>().ln()
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let exps: Vec<f64> = z.iter().map(|&zi| (zi - m).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Mean softmax cross-entropy of the logits `W2 W1 x`.
pub fn matrixnet_loss(p: &MatrixNetParams, batch: &ClassificationBatch) -> Result<f64> {
    check_shapes(p, batch)?;
    let n = batch.len();
    let mut total = 0.0;
    for i in 0..n {
        let x = batch.inputs.row(i);
        let a = p.w1.matvec(x);
        let z = p.w2.matvec(&a);
        total += logsumexp(&z) - z[batch.labels[i]];
    }
    Ok(total / n as f64)
}

/// Euclidean gradient `(dL/dW1, dL/dW2)`.
pub fn matrixnet_grad(
    p: &MatrixNetParams,
    batch: &ClassificationBatch,
) -> Result<MatrixNetDirection> {
    check_shapes(p, batch)?;
    let n = batch.len();
    let scale = 1.0 / n as f64;
    let mut g1 = DenseMatrix::zeros(p.hidden_dim(), p.d_in());
    let mut g2 = DenseMatrix::zeros(p.d_out(), p.hidden_dim());
    for i in 0..n {
        let x = batch.inputs.row(i);
        let a = p.w1.matvec(x);
        let z = p.w2.matvec(&a);
        let mut gz = softmax(&z);
        gz[batch.labels[i]] -= 1.0;
        // dW2 += gz a^T; dW1 += (W2^T gz) x^T
        for (r, &gzr) in gz.iter().enumerate() {
            let row = g2.row_mut(r);
            for (c, &ac) in a.iter().enumerate() {
                row[c] += scale * gzr * ac;
            }
        }
        let back = p.w2.tr_matvec(&gz);
        for (r, &br) in back.iter().enumerate() {
            let row = g1.row_mut(r);
            for (c, &xc) in x.iter().enumerate() {
                row[c] += scale * br * xc;
            }
        }
    }
    Ok(MatrixNetDirection { d_w1: g1, d_w2: g2 })
}

/// Exact Hessian-vector product of the flattened parameters with the
/// flattened direction, computed per example from the softmax
/// Gauss-Newton structure plus the bilinear coupling terms.
pub fn matrixnet_hvp(
    p: &MatrixNetParams,
    batch: &ClassificationBatch,
    dir: &MatrixNetDirection,
) -> Result<MatrixNetDirection> {
    check_shapes(p, batch)?;
    assert_eq!(
        dir.d_w1.shape(),
        p.w1.shape(),
        "direction W1 shape mismatch"
    );
    assert_eq!(
        dir.d_w2.shape(),
        p.w2.shape(),
        "direction W2 shape mismatch"
    );
    let n = batch.len();
    let scale = 1.0 / n as f64;
    let mut h1 = DenseMatrix::zeros(p.hidden_dim(), p.d_in());
    let mut h2 = DenseMatrix::zeros(p.d_out(), p.hidden_dim());
    for i in 0..n {
        let x = batch.inputs.row(i);
        let a = p.w1.matvec(x);
        let z = p.w2.matvec(&a);
        let probs = softmax(&z);
        let mut gz = probs.clone();
        gz[batch.labels[i]] -= 1.0;

        let a_dot = dir.d_w1.matvec(x);
        let mut z_dot = dir.d_w2.matvec(&a);
        for (zd, w) in z_dot.iter_mut().zip(p.w2.matvec(&a_dot)) {
            *zd += w;
        }
        // g_dot = (diag(p) - p p^T) z_dot
        let pz: f64 = probs.iter().zip(&z_dot).map(|(&pi, &zi)| pi * zi).sum();
        let g_dot: Vec<f64> = probs
            .iter()
            .zip(&z_dot)
            .map(|(&pi, &zi)| pi * (zi - pz))
            .collect();

        // dW2 contribution: g_dot a^T + gz a_dot^T
        for r in 0..p.d_out() {
            let row = h2.row_mut(r);
            for c in 0..p.hidden_dim() {
                row[c] += scale * (g_dot[r] * a[c] + gz[r] * a_dot[c]);
            }
        }
        // dW1 contribution: (V2^T gz + W2^T g_dot) x^T
        let mut back = dir.d_w2.tr_matvec(&gz);
        for (b, w) in back.iter_mut().zip(p.w2.tr_matvec(&g_dot)) {
            *b += w;
        }
        for (r, &br) in back.iter().enumerate() {
            let row = h1.row_mut(r);
            for (c, &xc) in x.iter().enumerate() {
                row[c] += scale * br * xc;
            }
        }
    }
    Ok(MatrixNetDirection { d_w1: h1, d_w2: h2 })
}
