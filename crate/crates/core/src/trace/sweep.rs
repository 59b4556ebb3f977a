//! Hessian operators for the matrix net and trace sweeps along orbit
//! curves.

use crate::error::{Error, Result};
use crate::geometry::{riemannian_hvp, Metric, OrbitCurve};
use crate::models::{matrixnet_grad, matrixnet_hvp, ClassificationBatch, MatrixNetParams};
use crate::numerics::{DenseMatrix, SeededRng};
use crate::trace::{exact_trace, hutchinson, hutchpp, FnOperator, LinearOperator};

/// The Euclidean Hessian of the matrix-net loss as an operator on the
/// flattened parameter space (column-stacked `W1`, then `W2`).
pub fn euclidean_hessian_operator<'a>(
    params: &'a MatrixNetParams,
    batch: &'a ClassificationBatch,
) -> impl LinearOperator + 'a {
    let dim = params.dim();
    FnOperator::new(dim, move |x: &[f64]| {
        let dir = params.direction_from_flat(x);
        let hv = matrixnet_hvp(params, batch, &dir).expect("hvp shapes fixed by construction");
        params.direction_to_flat(&hv)
    })
}

/// The corrected Riemannian Hessian (inv metric) as an operator on the
/// flattened parameter space: Euclidean HVP, five-term correction, then
/// horizontal projection.
pub fn riemannian_hessian_operator<'a>(
    params: &'a MatrixNetParams,
    batch: &'a ClassificationBatch,
    metric: Metric,
) -> Result<impl LinearOperator + 'a> {
    let dim = params.dim();
    let point = params.to_factor_pair();
    let egrad_dir = matrixnet_grad(params, batch)?;
    let egrad = params.direction_to_tangent(&egrad_dir);
    Ok(FnOperator::new(dim, move |x: &[f64]| {
        let dir = params.direction_from_flat(x);
        let xi = params.direction_to_tangent(&dir);
        let ehvp_dir =
            matrixnet_hvp(params, batch, &dir).expect("hvp shapes fixed by construction");
        let ehvp = params.direction_to_tangent(&ehvp_dir);
        let out = riemannian_hvp(&metric, &point, &xi, &ehvp, &egrad)
            .expect("riemannian hvp on full-rank factors");
        params.direction_to_flat(&params.direction_from_tangent(&out))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Hutchinson,
    HutchPlusPlus,
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Hutchinson => "hutchinson",
            EstimatorKind::HutchPlusPlus => "hutchpp",
        }
    }
}

/// One (alpha, operator, estimator) cell of a trace sweep.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub alpha: f64,
    /// "euclidean" or "riemannian".
    pub operator: &'static str,
    pub estimator: EstimatorKind,
    pub mean: f64,
    pub std: f64,
    pub std_of_mean: f64,
    pub n_probes: usize,
    pub mvp_count: usize,
    pub exact: f64,
    /// Per-probe estimates, for error-versus-budget curves.
    pub probes: Vec<f64>,
    pub sketched_part: f64,
    pub setup_mvps: usize,
}

/// Sweep both Hessian traces along an orbit curve.
///
/// For every `alpha` the model is moved to `orbit.point(alpha)`, both
/// Hessian operators are built there, and each requested estimator runs
/// with the shared `budget` (Hutch++ spends `2k` of it on its sketch).
/// Every cell draws from its own derived rng sub-stream, so results do
/// not depend on evaluation order.
#[allow(clippy::too_many_arguments)]
pub fn orbit_trace_sweep(
    base: &MatrixNetParams,
    a: &DenseMatrix,
    alpha_grid: &[f64],
    estimators: &[EstimatorKind],
    budget: usize,
    sketch_size: usize,
    batch: &ClassificationBatch,
    metric: Metric,
    rng: &SeededRng,
) -> Result<Vec<SweepCell>> {
    if alpha_grid.contains(&0.0) {
        return Err(Error::ZeroAlpha);
    }
    let curve = OrbitCurve::new(base.to_factor_pair(), a.clone());
    let mut cells = Vec::new();
    for (ai, &alpha) in alpha_grid.iter().enumerate() {
        let moved = MatrixNetParams::from_factor_pair(&curve.point(alpha)?);
        let euclid = euclidean_hessian_operator(&moved, batch);
        let riem = riemannian_hessian_operator(&moved, batch, metric)?;
        let operators: [(&str, &dyn LinearOperator); 2] =
            [("euclidean", &euclid), ("riemannian", &riem)];
        for (oi, (name, op)) in operators.iter().enumerate() {
            let exact = exact_trace(*op);
            for (ei, est) in estimators.iter().enumerate() {
                let stream = (ai as u64) << 16 | (oi as u64) << 8 | ei as u64;
                let mut cell_rng = rng.substream(stream);
                let estimate = match est {
                    EstimatorKind::Hutchinson => hutchinson(*op, budget, &mut cell_rng),
                    EstimatorKind::HutchPlusPlus => {
                        hutchpp(*op, sketch_size, budget, &mut cell_rng)?
                    }
                };
                cells.push(SweepCell {
                    alpha,
                    operator: name,
                    estimator: *est,
                    mean: estimate.mean,
                    std: estimate.std,
                    std_of_mean: estimate.std_of_mean(),
                    n_probes: estimate.n_probes,
                    mvp_count: estimate.mvp_count,
                    exact,
                    probes: estimate.probes,
                    sketched_part: estimate.sketched_part,
                    setup_mvps: estimate.setup_mvps,
                });
            }
        }
    }
    Ok(cells)
}

/// Eigenvalues of a materialized operator.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Real parts, sorted descending.
    pub real_parts: Vec<f64>,
    /// Largest imaginary magnitude encountered.
    pub max_imag: f64,
}

/// Materialize the operator with `dim` unit-vector products and compute
/// its full (generally complex) spectrum.
pub fn operator_spectrum(op: &dyn LinearOperator) -> Result<SpectrumResult> {
    let d = op.dim();
    let mut dense = nalgebra::DMatrix::<f64>::zeros(d, d);
    let mut basis = vec![0.0; d];
    for j in 0..d {
        basis[j] = 1.0;
        let col = op.apply(&basis);
        basis[j] = 0.0;
        for i in 0..d {
            dense[(i, j)] = col[i];
        }
    }
    if dense.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigensolver(
            "operator produced non-finite entries".into(),
        ));
    }
    let eigen = dense.complex_eigenvalues();
    let mut real_parts: Vec<f64> = eigen.iter().map(|c| c.re).collect();
    let max_imag = eigen.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    real_parts.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(SpectrumResult {
        real_parts,
        max_imag,
    })
}
