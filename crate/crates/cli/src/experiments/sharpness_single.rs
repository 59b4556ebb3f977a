//! Compute every sharpness measure once for a single model instance;
//! useful for spot checks and for exercising the library from the CLI.

use crate::artifacts::{write_json, RunArtifacts};
use crate::experiments::{config_echo, resolve_output_dir, CRATE_VERSION};
use crate::{ExperimentConfig, HarnessError, Result};
use geosharp::models::{
    diagonal_grad, diagonal_loss, generate_classification_batch, generate_sparse_regression,
    matrixnet_grad, matrixnet_loss, train_diagonal, DiagonalParams, MatrixNetParams,
};
use geosharp::sharpness::{
    adaptive_sharpness_worst, diagonal_geodesic_sharpness, matrixnet_geodesic_sharpness,
    DiagonalGeodesicOptions, SharpnessConfig,
};
use geosharp::{DenseMatrix, Metric, SeededRng};
use serde_json::json;

pub fn run_sharpness_single(cfg: &ExperimentConfig) -> Result<RunArtifacts> {
    let out_dir = resolve_output_dir(cfg)?;
    let master = SeededRng::new(cfg.seed, 0);
    let sharp_cfg = SharpnessConfig::new(cfg.rho)
        .with_iters(cfg.n_iter)
        .with_restarts(cfg.restarts);

    let measures = if cfg.model == "diagonal" {
        let n = cfg.resolved_n();
        let mut data_rng = master.substream(1);
        let data = generate_sparse_regression(n, cfg.d, cfg.sparsity, cfg.noise, &mut data_rng);
        let mut train_rng = master.substream(2);
        let lr = (cfg.lr_range.0 * cfg.lr_range.1).sqrt();
        let init_scale = 1.0 / (cfg.d as f64).sqrt();
        let trained = train_diagonal(
            &data,
            lr,
            init_scale,
            cfg.train_tol,
            cfg.max_iters,
            &mut train_rng,
        )
        .map_err(|e| HarnessError::Experiment(e.to_string()))?;
        if !trained.converged {
            return Err(HarnessError::Experiment(format!(
                "model did not reach {} (final loss {:.3e})",
                cfg.train_tol, trained.final_loss
            )));
        }
        let params = trained.params;
        let w0 = params.flatten();
        let c: Vec<f64> = w0.iter().map(|t| t.abs()).collect();
        let loss = |w: &[f64]| diagonal_loss(&DiagonalParams::from_flat(w), &data);
        let grad = |w: &[f64]| {
            let p = DiagonalParams::from_flat(w);
            let (gu, gv) = diagonal_grad(&p, &data)?;
            let mut g = gu;
            g.extend(gv);
            Ok(g)
        };
        let adaptive =
            adaptive_sharpness_worst(&loss, &grad, &w0, &c, &sharp_cfg, &master.substream(3))?;
        let inv = diagonal_geodesic_sharpness(
            &params,
            &data,
            &DiagonalGeodesicOptions::inv_default(),
            &sharp_cfg,
            &master.substream(4),
        )?;
        let mix = diagonal_geodesic_sharpness(
            &params,
            &data,
            &DiagonalGeodesicOptions::mix_default(),
            &sharp_cfg,
            &master.substream(5),
        )?;
        json!({
            "model": "diagonal",
            "train_loss": trained.final_loss,
            "iterations": trained.iterations,
            "adaptive": adaptive.value,
            "geodesic_inv": inv.value,
            "geodesic_mix": mix.value,
            "restart_values": {
                "adaptive": adaptive.restart_values,
                "inv": inv.restart_values,
                "mix": mix.restart_values,
            },
        })
    } else {
        let mut rng = master.substream(1);
        let batch = generate_classification_batch(cfg.batch_size, cfg.d_in, cfg.d_out, &mut rng);
        let s1 = 1.0 / (cfg.d_in as f64).sqrt();
        let s2 = 1.0 / (cfg.hidden as f64).sqrt();
        let mut init_rng = master.substream(2);
        let params = MatrixNetParams::new(
            DenseMatrix::from_fn(cfg.hidden, cfg.d_in, |_, _| s1 * init_rng.normal()),
            DenseMatrix::from_fn(cfg.d_out, cfg.hidden, |_, _| s2 * init_rng.normal()),
        );
        let w0 = params.flatten();
        let c: Vec<f64> = w0.iter().map(|t| t.abs().max(1e-12)).collect();
        let loss = |w: &[f64]| matrixnet_loss(&params.unflatten(w), &batch);
        let grad = |w: &[f64]| {
            let g = matrixnet_grad(&params.unflatten(w), &batch)?;
            Ok(params.direction_to_flat(&g))
        };
        let adaptive =
            adaptive_sharpness_worst(&loss, &grad, &w0, &c, &sharp_cfg, &master.substream(3))?;
        let metric = Metric::new(cfg.metric.kind()).with_epsilon(cfg.epsilon);
        let geodesic = matrixnet_geodesic_sharpness(
            &params,
            &batch,
            metric,
            &sharp_cfg,
            &master.substream(4),
        )?;
        json!({
            "model": "matrixnet",
            "metric": cfg.metric,
            "base_loss": matrixnet_loss(&params, &batch)?,
            "adaptive": adaptive.value,
            "geodesic": geodesic.value,
            "restart_values": {
                "adaptive": adaptive.restart_values,
                "geodesic": geodesic.restart_values,
            },
        })
    };

    let summary = json!({
        "experiment": "sharpness-single",
        "version": CRATE_VERSION,
        "seed": cfg.seed,
        "config": config_echo(cfg),
        "measures": measures,
    });
    let summary_path = out_dir.join("summary.json");
    write_json(&summary_path, &summary)?;
    Ok(RunArtifacts {
        summary,
        files: vec![summary_path],
        output_dir: out_dir,
    })
}
