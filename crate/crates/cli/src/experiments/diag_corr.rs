//! The diagonal-network sharpness/generalization correlation experiment:
//! train a population of diagonal nets on one sparse regression task with
//! varied learning rates and init scales, measure worst-case adaptive and
//! inv/mix geodesic sharpness at the found minima, and correlate each
//! measure with held-out loss via Kendall's tau.

use crate::artifacts::{write_json, Cell, CsvTable, RunArtifacts};
use crate::experiments::{config_echo, fan_out, resolve_output_dir, CRATE_VERSION};
use crate::{ExperimentConfig, HarnessError, Result};
use geosharp::models::{
    diagonal_grad, diagonal_loss, generate_sparse_regression, train_diagonal, DiagonalParams,
    RegressionData,
};
use geosharp::numerics::kendall_tau;
use geosharp::sharpness::{
    adaptive_sharpness_worst, diagonal_geodesic_sharpness, BallNorm, CurveMode,
    DiagonalGeodesicOptions, SharpnessConfig,
};
use geosharp::{DenseMatrix, Error as CoreError, MetricKind, SeededRng};
use serde_json::json;

// Sub-stream layout: one stream per purpose, one block per model.
const STREAM_DATA: u64 = 1;
const STREAM_TEST: u64 = 2;
const STREAM_MODEL_BASE: u64 = 1_000;
const STREAM_SHARP_ADAPTIVE: u64 = 100_000;
const STREAM_SHARP_INV: u64 = 200_000;
const STREAM_SHARP_MIX: u64 = 300_000;

#[derive(Debug, Clone)]
struct ModelRow {
    index: usize,
    lr: f64,
    init_scale: f64,
    converged: bool,
    iterations: usize,
    train_loss: f64,
    test_loss: Option<f64>,
    s_adaptive: Option<f64>,
    s_inv: Option<f64>,
    s_mix: Option<f64>,
}

/// Geodesic-ball conventions used at the trained (interpolating) minima.
///
/// Both metrics bound the per-coordinate geodesic exponent, `||B|| <=
/// rho`. For the mix metric the plain metric ball is equivalent to a
/// round ball on the predictor change, which is identical for every
/// interpolating model and therefore carries no ranking information; the
/// exponent ball is the convention under which the measure
/// distinguishes models (a constant metric rescaling per the
/// scaled-metrics identity).
fn inv_options() -> DiagonalGeodesicOptions {
    DiagonalGeodesicOptions::inv_default()
}

fn mix_options() -> DiagonalGeodesicOptions {
    DiagonalGeodesicOptions {
        kind: MetricKind::Mix,
        curve: CurveMode::Exact,
        ball: BallNorm::QuotientExponent,
        precondition: Some(MetricKind::Inv),
    }
}

/// Split a regression problem into `batches` contiguous row chunks.
fn split_batches(data: &RegressionData, batches: usize) -> Vec<RegressionData> {
    if batches <= 1 {
        return vec![data.clone()];
    }
    let n = data.n();
    let d = data.d();
    let per = n.div_ceil(batches);
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let end = (start + per).min(n);
        let x = DenseMatrix::from_fn(end - start, d, |i, j| data.x[(start + i, j)]);
        let y = data.y[start..end].to_vec();
        out.push(RegressionData::new(x, y, data.beta_star.clone()));
        start = end;
    }
    out
}

fn mean_sharpness_over_batches(
    batches: &[RegressionData],
    run: impl Fn(&RegressionData, &SeededRng) -> Result<f64>,
    rng: &SeededRng,
) -> Result<f64> {
    let mut total = 0.0;
    for (bi, batch) in batches.iter().enumerate() {
        total += run(batch, &rng.substream(bi as u64))?;
    }
    Ok(total / batches.len() as f64)
}

pub fn run_diag_corr(cfg: &ExperimentConfig) -> Result<RunArtifacts> {
    let out_dir = resolve_output_dir(cfg)?;
    let master = SeededRng::new(cfg.seed, 0);
    let n = cfg.resolved_n();

    let mut data_rng = master.substream(STREAM_DATA);
    let data = generate_sparse_regression(n, cfg.d, cfg.sparsity, cfg.noise, &mut data_rng);
    let beta_star = data.beta_star.clone().expect("generator provides beta*");

    // Held-out set: fresh Gaussian inputs, noiseless labels from beta*.
    let mut test_rng = master.substream(STREAM_TEST);
    let n_test = cfg.test_factor.max(1) * n;
    let x_test = DenseMatrix::from_fn(n_test, cfg.d, |_, _| test_rng.normal());
    let y_test = x_test.matvec(&beta_star);
    let test_data = RegressionData::new(x_test, y_test, Some(beta_star));

    let sharp_batches = split_batches(&data, cfg.sharpness_batches);
    let sharp_cfg = SharpnessConfig::new(cfg.rho)
        .with_iters(cfg.n_iter)
        .with_restarts(cfg.restarts);
    let base_init = 1.0 / (cfg.d as f64).sqrt();

    let rows: Vec<ModelRow> = fan_out(cfg.jobs, cfg.n_models, |i| {
        let mut hp_rng = master.substream(STREAM_MODEL_BASE + i as u64);
        let lr = hp_rng.log_uniform(cfg.lr_range.0, cfg.lr_range.1);
        let init_scale =
            base_init * hp_rng.log_uniform(cfg.init_scale_range.0, cfg.init_scale_range.1);
        let trained = match train_diagonal(
            &data,
            lr,
            init_scale,
            cfg.train_tol,
            cfg.max_iters,
            &mut hp_rng,
        ) {
            Ok(out) => out,
            Err(CoreError::Divergence(_)) => {
                return Ok(ModelRow {
                    index: i,
                    lr,
                    init_scale,
                    converged: false,
                    iterations: cfg.max_iters,
                    train_loss: f64::INFINITY,
                    test_loss: None,
                    s_adaptive: None,
                    s_inv: None,
                    s_mix: None,
                })
            }
            Err(e) => return Err(e.into()),
        };
        if !trained.converged {
            return Ok(ModelRow {
                index: i,
                lr,
                init_scale,
                converged: false,
                iterations: trained.iterations,
                train_loss: trained.final_loss,
                test_loss: None,
                s_adaptive: None,
                s_inv: None,
                s_mix: None,
            });
        }
        let params = trained.params;
        let test_loss = diagonal_loss(&params, &test_data)? / n_test as f64;

        let w0 = params.flatten();
        let c: Vec<f64> = w0.iter().map(|t| t.abs()).collect();
        let s_adaptive = mean_sharpness_over_batches(
            &sharp_batches,
            |batch, rng| {
                let loss = |w: &[f64]| diagonal_loss(&DiagonalParams::from_flat(w), batch);
                let grad = |w: &[f64]| {
                    let p = DiagonalParams::from_flat(w);
                    let (gu, gv) = diagonal_grad(&p, batch)?;
                    let mut g = gu;
                    g.extend(gv);
                    Ok(g)
                };
                Ok(adaptive_sharpness_worst(&loss, &grad, &w0, &c, &sharp_cfg, rng)?.value)
            },
            &master.substream(STREAM_SHARP_ADAPTIVE + i as u64),
        )?;
        let s_inv = mean_sharpness_over_batches(
            &sharp_batches,
            |batch, rng| {
                Ok(
                    diagonal_geodesic_sharpness(&params, batch, &inv_options(), &sharp_cfg, rng)?
                        .value,
                )
            },
            &master.substream(STREAM_SHARP_INV + i as u64),
        )?;
        let s_mix = mean_sharpness_over_batches(
            &sharp_batches,
            |batch, rng| {
                Ok(
                    diagonal_geodesic_sharpness(&params, batch, &mix_options(), &sharp_cfg, rng)?
                        .value,
                )
            },
            &master.substream(STREAM_SHARP_MIX + i as u64),
        )?;

        Ok(ModelRow {
            index: i,
            lr,
            init_scale,
            converged: true,
            iterations: trained.iterations,
            train_loss: trained.final_loss,
            test_loss: Some(test_loss),
            s_adaptive: Some(s_adaptive),
            s_inv: Some(s_inv),
            s_mix: Some(s_mix),
        })
    })?;

    let converged: Vec<&ModelRow> = rows.iter().filter(|r| r.converged).collect();
    if converged.len() < 10 {
        return Err(HarnessError::Experiment(format!(
            "only {} of {} models converged (need at least 10)",
            converged.len(),
            cfg.n_models
        )));
    }
    let tests: Vec<f64> = converged.iter().map(|r| r.test_loss.unwrap()).collect();
    let tau_of = |pick: fn(&ModelRow) -> Option<f64>| -> Result<f64> {
        let values: Vec<f64> = converged.iter().map(|r| pick(r).unwrap()).collect();
        Ok(kendall_tau(&values, &tests)?)
    };
    let tau_adaptive = tau_of(|r| r.s_adaptive)?;
    let tau_inv = tau_of(|r| r.s_inv)?;
    let tau_mix = tau_of(|r| r.s_mix)?;

    let mut table = CsvTable::new(&[
        "model",
        "lr",
        "init_scale",
        "converged",
        "iterations",
        "train_loss",
        "test_loss",
        "sharpness_adaptive",
        "sharpness_inv",
        "sharpness_mix",
    ]);
    for r in &rows {
        let opt = |v: Option<f64>| v.map(Cell::Float).unwrap_or(Cell::Missing);
        table.push(vec![
            r.index.into(),
            r.lr.into(),
            r.init_scale.into(),
            Cell::UInt(r.converged as u64),
            r.iterations.into(),
            if r.train_loss.is_finite() {
                r.train_loss.into()
            } else {
                Cell::Missing
            },
            opt(r.test_loss),
            opt(r.s_adaptive),
            opt(r.s_inv),
            opt(r.s_mix),
        ]);
    }
    let models_path = out_dir.join("models.csv");
    table.write(&models_path)?;

    let summary = json!({
        "experiment": "diag-corr",
        "version": CRATE_VERSION,
        "seed": cfg.seed,
        "config": config_echo(cfg),
        "n_models": cfg.n_models,
        "converged": converged.len(),
        "tau": {
            "adaptive": tau_adaptive,
            "inv": tau_inv,
            "mix": tau_mix,
        },
    });
    let summary_path = out_dir.join("summary.json");
    write_json(&summary_path, &summary)?;

    Ok(RunArtifacts {
        summary,
        files: vec![models_path, summary_path],
        output_dir: out_dir,
    })
}
