//! Corrected Riemannian Hessian-vector products for the inv metric.
//!
//! The quotient Hessian is reached from Euclidean derivatives through a
//! five-term correction per factor (the two-factor fixed-rank geometry),
//! followed by a horizontal projection of the output:
//!
//! ```text
//! C(xi)|_G =  (ehvp(xi))|_G Gb
//!          + 2 egrad_G sym(G^T xi_G)
//!          -   xi_G Gb^-1 sym(G^T rgrad_G)
//!          -   egrad_G sym(G^T xi_G)
//!          +   G Gb^-1 sym(xi_G^T rgrad_G)
//! ```
//!
//! with `Gb` the (relaxed) Gram, `rgrad = egrad * Gb` the inv-metric
//! Riemannian gradient, and `sym(M) = (M + M^T) / 2`. The resulting
//! operator is generally not symmetric; consumers treat it as a plain
//! linear map.

use crate::error::{Error, Result};
use crate::geometry::{project_horizontal, FactorPair, Metric, MetricKind, TangentPair};
use crate::numerics::DenseMatrix;

/// Apply the corrected, horizontally projected Hessian to `xi`.
///
/// `ehvp_xi` must be the Euclidean Hessian-vector product of the loss at
/// `point` applied to `xi` (both components), and `egrad` the Euclidean
/// gradient at `point`. Only the inv metric is supported; Euclidean
/// callers use the Euclidean HVP directly, and no mix-metric correction
/// is implemented.
pub fn riemannian_hvp(
    metric: &Metric,
    point: &FactorPair,
    xi: &TangentPair,
    ehvp_xi: &TangentPair,
    egrad: &TangentPair,
) -> Result<TangentPair> {
    if metric.kind != MetricKind::Inv {
        return Err(Error::UnsupportedMetric {
            op: "riemannian_hvp",
            metric: metric.kind.name(),
        });
    }
    let gram_g = point.gram_g(metric.epsilon);
    let gram_h = point.gram_h(metric.epsilon);
    let gram_g_inv = gram_g.inverse().map_err(|_| Error::SingularGram {
        context: "riemannian_hvp G",
    })?;
    let gram_h_inv = gram_h.inverse().map_err(|_| Error::SingularGram {
        context: "riemannian_hvp H",
    })?;
    let rgrad_g = egrad.g.matmul(&gram_g);
    let rgrad_h = egrad.h.matmul(&gram_h);

    let corrected = |factor: &DenseMatrix,
                     tangent: &DenseMatrix,
                     ehvp: &DenseMatrix,
                     egrad: &DenseMatrix,
                     rgrad: &DenseMatrix,
                     gram: &DenseMatrix,
                     gram_inv: &DenseMatrix| {
        let sym_ftan = factor.tr_matmul(tangent).sym();
        let mut out = ehvp.matmul(gram);
        out.axpy(2.0, &egrad.matmul(&sym_ftan));
        out.axpy(
            -1.0,
            &tangent
                .matmul(gram_inv)
                .matmul(&factor.tr_matmul(rgrad).sym()),
        );
        out.axpy(-1.0, &egrad.matmul(&sym_ftan));
        out.axpy(
            1.0,
            &factor
                .matmul(gram_inv)
                .matmul(&tangent.tr_matmul(rgrad).sym()),
        );
        out
    };

    let lifted = TangentPair::new(
        corrected(
            &point.g,
            &xi.g,
            &ehvp_xi.g,
            &egrad.g,
            &rgrad_g,
            &gram_g,
            &gram_g_inv,
        ),
        corrected(
            &point.h,
            &xi.h,
            &ehvp_xi.h,
            &egrad.h,
            &rgrad_h,
            &gram_h,
            &gram_h_inv,
        ),
    );
    project_horizontal(metric, point, &lifted)
}
