//! The orbit trace-estimation experiment: sweep both Hessian traces along
//! a curve through a GL(h) orbit of a shallow matrix-weight net, compare
//! Hutchinson against Hutch++ under a shared product budget, and extract
//! spectra at selected points.

use crate::artifacts::{write_json, Cell, CsvTable, RunArtifacts};
use crate::experiments::{config_echo, resolve_output_dir, CRATE_VERSION};
use crate::{ExperimentConfig, HarnessError, Result};
use geosharp::models::{
    generate_classification_batch, load_idx_images_path, load_idx_labels_path, ClassificationBatch,
    MatrixNetParams,
};
use geosharp::numerics::sample_gl_matrix;
use geosharp::trace::{
    euclidean_hessian_operator, operator_spectrum, orbit_trace_sweep, riemannian_hessian_operator,
    EstimatorKind, LinearOperator, SweepCell,
};
use geosharp::{DenseMatrix, Metric, OrbitCurve, SeededRng};
use serde_json::json;

const STREAM_BATCH: u64 = 1;
const STREAM_INIT: u64 = 2;
const STREAM_ORBIT: u64 = 3;
const STREAM_SWEEP: u64 = 4;

fn build_batch(cfg: &ExperimentConfig, rng: &SeededRng) -> Result<(ClassificationBatch, usize)> {
    if let (Some(images_path), Some(labels_path)) = (&cfg.idx_images, &cfg.idx_labels) {
        let images = load_idx_images_path(images_path)?;
        let labels = load_idx_labels_path(labels_path)?;
        let total = images.rows.rows();
        if labels.len() != total {
            return Err(HarnessError::Config(format!(
                "IDX image count {total} does not match label count {}",
                labels.len()
            )));
        }
        if total < cfg.batch_size {
            return Err(HarnessError::Config(format!(
                "IDX file holds {total} examples, batch needs {}",
                cfg.batch_size
            )));
        }
        // Seeded partial Fisher-Yates draw of a random mini-batch.
        let mut idx: Vec<usize> = (0..total).collect();
        let mut draw_rng = rng.substream(0);
        for i in 0..cfg.batch_size {
            let j = i + draw_rng.index(total - i);
            idx.swap(i, j);
        }
        let d_in = images.rows.cols();
        let inputs = DenseMatrix::from_fn(cfg.batch_size, d_in, |r, c| images.rows[(idx[r], c)]);
        let picked: Vec<usize> = idx[..cfg.batch_size].iter().map(|&r| labels[r]).collect();
        if let Some(&bad) = picked.iter().find(|&&l| l >= cfg.d_out) {
            return Err(HarnessError::Config(format!(
                "IDX label {bad} out of range for d_out {}",
                cfg.d_out
            )));
        }
        Ok((ClassificationBatch::new(inputs, picked), d_in))
    } else {
        let mut batch_rng = rng.substream(0);
        Ok((
            generate_classification_batch(cfg.batch_size, cfg.d_in, cfg.d_out, &mut batch_rng),
            cfg.d_in,
        ))
    }
}

fn init_net(cfg: &ExperimentConfig, d_in: usize, rng: &mut SeededRng) -> MatrixNetParams {
    let h = cfg.hidden;
    let s1 = 1.0 / (d_in as f64).sqrt();
    let s2 = 1.0 / (h as f64).sqrt();
    MatrixNetParams::new(
        DenseMatrix::from_fn(h, d_in, |_, _| s1 * rng.normal()),
        DenseMatrix::from_fn(cfg.d_out, h, |_, _| s2 * rng.normal()),
    )
}

fn relative_range(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = values
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    (max - min).abs() / scale
}

pub fn run_orbit_trace(cfg: &ExperimentConfig) -> Result<RunArtifacts> {
    let out_dir = resolve_output_dir(cfg)?;
    let master = SeededRng::new(cfg.seed, 0);
    let metric = Metric::inv().with_epsilon(cfg.epsilon);

    let (batch, d_in) = build_batch(cfg, &master.substream(STREAM_BATCH))?;
    let mut init_rng = master.substream(STREAM_INIT);
    let params = init_net(cfg, d_in, &mut init_rng);
    let mut orbit_rng = master.substream(STREAM_ORBIT);
    let a = sample_gl_matrix(cfg.hidden, &mut orbit_rng);

    let estimators = [EstimatorKind::Hutchinson, EstimatorKind::HutchPlusPlus];
    let cells = orbit_trace_sweep(
        &params,
        &a,
        &cfg.alpha_grid,
        &estimators,
        cfg.budget,
        cfg.sketch,
        &batch,
        metric,
        &master.substream(STREAM_SWEEP),
    )?;

    // Panel 1: trace versus alpha with error bars.
    let mut sweep_table = CsvTable::new(&[
        "alpha",
        "operator",
        "estimator",
        "mean",
        "std",
        "std_of_mean",
        "n_probes",
        "mvp_count",
        "exact",
    ]);
    for c in &cells {
        sweep_table.push(vec![
            c.alpha.into(),
            c.operator.into(),
            c.estimator.name().into(),
            c.mean.into(),
            c.std.into(),
            c.std_of_mean.into(),
            c.n_probes.into(),
            c.mvp_count.into(),
            c.exact.into(),
        ]);
    }
    let sweep_path = out_dir.join("trace_sweep.csv");
    sweep_table.write(&sweep_path)?;

    // Panel 2: relative error versus invested products at selected alphas.
    let mut relerr_table = CsvTable::new(&[
        "alpha",
        "operator",
        "estimator",
        "mvps",
        "estimate",
        "rel_error",
    ]);
    for c in cells
        .iter()
        .filter(|c| cfg.relerr_alphas.contains(&c.alpha))
    {
        for m in 1..=c.mvp_count {
            let (estimate, rel) = match c.prefix_estimate(m) {
                Some(v) if c.exact != 0.0 => (
                    Cell::Float(v),
                    Cell::Float((c.exact - v).abs() / c.exact.abs()),
                ),
                Some(v) => (Cell::Float(v), Cell::Missing),
                None => (Cell::Missing, Cell::Missing),
            };
            relerr_table.push(vec![
                c.alpha.into(),
                c.operator.into(),
                c.estimator.name().into(),
                m.into(),
                estimate,
                rel,
            ]);
        }
    }
    let relerr_path = out_dir.join("relerr_curves.csv");
    relerr_table.write(&relerr_path)?;

    // Panel 3: spectra at selected points on the curve.
    let curve = OrbitCurve::new(params.to_factor_pair(), a.clone());
    let mut spectra_table = CsvTable::new(&[
        "alpha",
        "operator",
        "index",
        "eigenvalue",
        "rescaled",
        "max_imag",
    ]);
    for &alpha in &cfg.spectrum_alphas {
        let moved = MatrixNetParams::from_factor_pair(&curve.point(alpha)?);
        let euclid = euclidean_hessian_operator(&moved, &batch);
        let riem = riemannian_hessian_operator(&moved, &batch, metric)?;
        let ops: [(&str, &dyn LinearOperator); 2] = [("euclidean", &euclid), ("riemannian", &riem)];
        for (name, op) in ops {
            let spectrum = operator_spectrum(op)?;
            let top = spectrum
                .real_parts
                .iter()
                .map(|v| v.abs())
                .fold(0.0, f64::max)
                .max(1e-300);
            for (i, &ev) in spectrum.real_parts.iter().enumerate() {
                spectra_table.push(vec![
                    alpha.into(),
                    name.into(),
                    i.into(),
                    ev.into(),
                    (ev / top).into(),
                    spectrum.max_imag.into(),
                ]);
            }
        }
    }
    let spectra_path = out_dir.join("spectra.csv");
    spectra_table.write(&spectra_path)?;

    // Invariance summary over the exact traces.
    let collect_exact = |operator: &str| -> Vec<f64> {
        let mut seen = Vec::new();
        for c in cells.iter().filter(|c| c.operator == operator) {
            if !seen.iter().any(|&(a, _)| a == c.alpha) {
                seen.push((c.alpha, c.exact));
            }
        }
        seen.into_iter().map(|(_, e)| e).collect()
    };
    let riem_exact = collect_exact("riemannian");
    let euclid_exact = collect_exact("euclidean");
    let summary = json!({
        "experiment": "orbit-trace",
        "version": CRATE_VERSION,
        "seed": cfg.seed,
        "config": config_echo(cfg),
        "d_in": d_in,
        "parameter_dim": cfg.hidden * (d_in + cfg.d_out),
        "riemannian_exact_traces": riem_exact,
        "euclidean_exact_traces": euclid_exact,
        "riemannian_trace_rel_range": relative_range(&riem_exact),
        "euclidean_trace_rel_range": relative_range(&euclid_exact),
    });
    let summary_path = out_dir.join("summary.json");
    write_json(&summary_path, &summary)?;

    Ok(RunArtifacts {
        summary,
        files: vec![sweep_path, relerr_path, spectra_path, summary_path],
        output_dir: out_dir,
    })
}

trait PrefixEstimate {
    fn prefix_estimate(&self, mvps: usize) -> Option<f64>;
}

impl PrefixEstimate for SweepCell {
    fn prefix_estimate(&self, mvps: usize) -> Option<f64> {
        if mvps <= self.setup_mvps || self.probes.is_empty() {
            return None;
        }
        let used = (mvps - self.setup_mvps).min(self.probes.len());
        let mean: f64 = self.probes[..used].iter().sum::<f64>() / used as f64;
        Some(self.sketched_part + mean)
    }
}
