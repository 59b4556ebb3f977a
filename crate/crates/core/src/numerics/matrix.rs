//! Dense row-major matrices with the handful of kernels this crate needs:
//! products against plain and transposed operands, LU solves with partial
//! pivoting, and Householder thin QR.

use crate::error::{Error, Result};
use std::ops::{Index, IndexMut};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must match shape");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn scalar(value: f64) -> Self {
        Self::from_vec(1, 1, vec![value])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn ensure_finite(&self, context: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(context))
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self * other`
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &aik) in a_row.iter().enumerate() {
                if aik == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &bkj) in out_row.iter_mut().zip(b_row.iter()) {
                    *o += aik * bkj;
                }
            }
        }
        out
    }

    /// `self^T * other`
    pub fn tr_matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows, "tr_matmul shape mismatch");
        let mut out = DenseMatrix::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = other.row(k);
            for (i, &aki) in a_row.iter().enumerate() {
                if aki == 0.0 {
                    continue;
                }
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &bkj) in out_row.iter_mut().zip(b_row.iter()) {
                    *o += aki * bkj;
                }
            }
        }
        out
    }

    /// `self * other^T`
    pub fn matmul_tr(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.cols, "matmul_tr shape mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            let a_row = self.row(i);
            for j in 0..other.rows {
                let b_row = other.row(j);
                out[(i, j)] = dot(a_row, b_row);
            }
        }
        out
    }

    /// Gram matrix `self^T * self`.
    pub fn gram(&self) -> DenseMatrix {
        self.tr_matmul(self)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len(), "tr_matvec shape mismatch");
        let mut out = vec![0.0; self.cols];
        for (k, &xk) in x.iter().enumerate() {
            if xk == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(k)) {
                *o += a * xk;
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> DenseMatrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= s;
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), other.shape(), "add shape mismatch");
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&other.data) {
            *o += b;
        }
        out
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), other.shape(), "sub shape mismatch");
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&other.data) {
            *o -= b;
        }
        out
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &DenseMatrix) {
        assert_eq!(self.shape(), other.shape(), "axpy shape mismatch");
        for (o, &b) in self.data.iter_mut().zip(&other.data) {
            *o += s * b;
        }
    }

    /// Add `eps` to the diagonal.
    pub fn add_diag(&self, eps: f64) -> DenseMatrix {
        let mut out = self.clone();
        let n = self.rows.min(self.cols);
        for i in 0..n {
            out[(i, i)] += eps;
        }
        out
    }

    /// Symmetric part `(self + self^T) / 2`; identity at 1x1.
    pub fn sym(&self) -> DenseMatrix {
        assert_eq!(self.rows, self.cols, "sym needs a square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = 0.5 * (self[(i, j)] + self[(j, i)]);
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Frobenius inner product.
    pub fn inner(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "inner shape mismatch");
        dot(&self.data, &other.data)
    }

    /// Column-stacked entries.
    pub fn vec_columns(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    pub fn from_vec_columns(rows: usize, cols: usize, v: &[f64]) -> DenseMatrix {
        assert_eq!(v.len(), rows * cols, "column-stacked length mismatch");
        let mut m = DenseMatrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = v[j * rows + i];
            }
        }
        m
    }

    /// Solve `self * X = B` by LU with partial pivoting. Returns the
    /// solution and a cheap condition estimate `max|u_ii| / min|u_ii|`.
    pub fn lu_solve(&self, b: &DenseMatrix) -> Result<(DenseMatrix, f64)> {
        assert_eq!(self.rows, self.cols, "lu_solve needs a square matrix");
        assert_eq!(self.rows, b.rows, "lu_solve rhs shape mismatch");
        let n = self.rows;
        let m = b.cols;
        let mut lu = self.clone();
        let mut x = b.clone();
        let mut max_piv = 0.0f64;
        let mut min_piv = f64::INFINITY;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularOperator {
                    cond: f64::INFINITY,
                    limit: 1e12,
                });
            }
            if p != k {
                lu.data.swap_rows(n, k, p);
                x.data.swap_rows(m, k, p);
            }
            let piv = lu[(k, k)];
            max_piv = max_piv.max(piv.abs());
            min_piv = min_piv.min(piv.abs());
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                if f == 0.0 {
                    continue;
                }
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
                for j in 0..m {
                    let v = x[(k, j)];
                    x[(i, j)] -= f * v;
                }
            }
        }
        // Back substitution.
        for k in (0..n).rev() {
            let piv = lu[(k, k)];
            for j in 0..m {
                let mut s = x[(k, j)];
                for l in k + 1..n {
                    s -= lu[(k, l)] * x[(l, j)];
                }
                x[(k, j)] = s / piv;
            }
        }
        Ok((x, max_piv / min_piv))
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<DenseMatrix> {
        let (inv, _) = self.lu_solve(&DenseMatrix::identity(self.rows))?;
        Ok(inv)
    }
}

trait SwapRows {
    fn swap_rows(&mut self, cols: usize, a: usize, b: usize);
}

impl SwapRows for Vec<f64> {
    fn swap_rows(&mut self, cols: usize, a: usize, b: usize) {
        for j in 0..cols {
            self.swap(a * cols + j, b * cols + j);
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Thin QR of a D x k matrix (k <= D) via Householder reflections.
///
/// The returned Q has exactly orthonormal columns spanning (at least) the
/// range of `m`; rank deficiency is allowed and trailing columns are
/// completed orthonormally.
pub fn thin_qr(m: &DenseMatrix) -> DenseMatrix {
    let d = m.rows();
    let k = m.cols();
    assert!(k <= d, "thin_qr needs k <= D");
    if k == 0 {
        return DenseMatrix::zeros(d, 0);
    }
    // Householder vectors stored in-place below the diagonal of r.
    let mut r = m.clone();
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = vec![0.0; d];
        let mut norm2 = 0.0;
        for i in j..d {
            let x = r[(i, j)];
            v[i] = x;
            norm2 += x * x;
        }
        let norm = norm2.sqrt();
        if norm == 0.0 {
            // Rank-deficient column: a zero reflector leaves this column
            // untouched; Q is completed from the identity block below.
            vs.push(v);
            continue;
        }
        let alpha = if v[j] >= 0.0 { -norm } else { norm };
        v[j] -= alpha;
        let vnorm2: f64 = v[j..].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            vs.push(vec![0.0; d]);
            continue;
        }
        // Apply the reflector to the remaining columns of r.
        for c in j..k {
            let mut s = 0.0;
            for i in j..d {
                s += v[i] * r[(i, c)];
            }
            let f = 2.0 * s / vnorm2;
            for i in j..d {
                r[(i, c)] -= f * v[i];
            }
        }
        vs.push(v);
    }
    // Q = H_0 H_1 ... H_{k-1} * (first k columns of identity).
    let mut q = DenseMatrix::zeros(d, k);
    for j in 0..k {
        q[(j, j)] = 1.0;
    }
    for (j, v) in vs.iter().enumerate().rev() {
        let vnorm2: f64 = v[j..].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in 0..k {
            let mut s = 0.0;
            for i in j..d {
                s += v[i] * q[(i, c)];
            }
            let f = 2.0 * s / vnorm2;
            for i in j..d {
                q[(i, c)] -= f * v[i];
            }
        }
    }
    q
}
