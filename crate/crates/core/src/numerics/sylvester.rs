//! Sylvester equation solvers via vectorization.
//!
//! `A X + X C = B` for h x h matrices is rewritten as the h^2 x h^2 linear
//! system `(I (x) A + C^T (x) I) vec(X) = vec(B)` with column-stacked
//! `vec`, then solved by dense LU. The cost is O(h^6), which is fine for
//! the head dimensions this crate targets (h <= 64); no Bartels-Stewart
//! machinery is attempted.

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

const COND_LIMIT: f64 = 1e12;

/// Solve `A X + X C = B` for square `A`, `C`, `B` of equal size.
pub fn sylvester_general(a: &DenseMatrix, c: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let h = a.rows();
    assert_eq!(a.shape(), (h, h), "A must be square");
    assert_eq!(c.shape(), (h, h), "C must be square");
    assert_eq!(b.shape(), (h, h), "B must be square");
    a.ensure_finite("sylvester A")?;
    c.ensure_finite("sylvester C")?;
    b.ensure_finite("sylvester B")?;

    let n = h * h;
    let mut big = DenseMatrix::zeros(n, n);
    // vec(AX): block-diagonal copies of A.
    for j in 0..h {
        for i in 0..h {
            for k in 0..h {
                big[(j * h + i, j * h + k)] += a[(i, k)];
            }
        }
    }
    // vec(XC): entry (i + j*h, i + l*h) += C[l, j].
    for j in 0..h {
        for i in 0..h {
            for l in 0..h {
                big[(j * h + i, l * h + i)] += c[(l, j)];
            }
        }
    }
    let rhs = DenseMatrix::from_vec(n, 1, b.vec_columns());
    let (x, cond) = big.lu_solve(&rhs)?;
    if cond > COND_LIMIT {
        return Err(Error::SingularOperator {
            cond,
            limit: COND_LIMIT,
        });
    }
    Ok(DenseMatrix::from_vec_columns(h, h, x.data()))
}

/// Solve `A L + L A^T = B`.
///
/// Requires that `A` and `-A^T` share no eigenvalue; numerically this
/// surfaces as a condition estimate above 1e12.
pub fn sylvester_solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    sylvester_general(a, &a.transpose(), b)
}

/// Residual `||A L + L A^T - B||_F` of a candidate solution.
pub fn sylvester_residual(a: &DenseMatrix, b: &DenseMatrix, lambda: &DenseMatrix) -> f64 {
    a.matmul(lambda)
        .add(&lambda.matmul_tr(a))
        .sub(b)
        .frobenius_norm()
}
