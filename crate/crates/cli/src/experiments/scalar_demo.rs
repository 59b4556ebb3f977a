//! Grid data for the scalar two-parameter model: loss, Euclidean and
//! Riemannian gradient norms, and both Hessian traces over a (theta1,
//! theta2) grid, each normalized to [0, 1].
//!
//! The Riemannian Hessian trace is computed by the geodesic
//! second-derivative oracle: the second time-derivative of the loss along
//! the exact inv-metric geodesic with a metric-orthonormal horizontal
//! direction. Cells on the axes (theta_i = 0), where the quotient
//! geometry degenerates, are emitted as missing values.

use crate::artifacts::{write_json, Cell, CsvTable, RunArtifacts};
use crate::experiments::{config_echo, resolve_output_dir, CRATE_VERSION};
use crate::{ExperimentConfig, Result};
use geosharp::models::{
    scalar_dataset_grad, scalar_dataset_hessian, scalar_dataset_loss, ScalarParams,
};
use geosharp::SeededRng;
use serde_json::json;
use std::path::PathBuf;

const STREAM_DATA: u64 = 1;
const TEACHER_SLOPE: f64 = 1.2;
const LABEL_NOISE: f64 = 0.2;

/// Second central difference of the loss along the exact geodesic
/// through `p` with inv-orthonormal horizontal direction.
fn riemannian_trace_oracle(p: ScalarParams, data: &[(f64, f64)]) -> f64 {
    // Horizontal direction xi = (theta2, theta1) * b has squared inv norm
    // 2 b^2; b = 1/sqrt(2) normalizes it.
    let b = 1.0 / 2f64.sqrt();
    let eps = 1e-4;
    let at = |t: f64| {
        let scale = (b * t).exp();
        scalar_dataset_loss(ScalarParams::new(p.theta1 * scale, p.theta2 * scale), data)
    };
    (at(eps) - 2.0 * at(0.0) + at(-eps)) / (eps * eps)
}

struct Grid {
    name: &'static str,
    values: Vec<Option<f64>>,
}

pub fn run_scalar_demo(cfg: &ExperimentConfig) -> Result<RunArtifacts> {
    let out_dir = resolve_output_dir(cfg)?;
    let master = SeededRng::new(cfg.seed, 0);
    let mut data_rng = master.substream(STREAM_DATA);
    let data: Vec<(f64, f64)> = (0..cfg.scalar_points)
        .map(|_| {
            let x = data_rng.normal();
            let y = TEACHER_SLOPE * x + LABEL_NOISE * data_rng.normal();
            (x, y)
        })
        .collect();

    let points = cfg.grid_points;
    let limit = cfg.grid_limit;
    let coord = |i: usize| -limit + 2.0 * limit * i as f64 / (points - 1) as f64;

    let mut grids = vec![
        Grid {
            name: "loss",
            values: Vec::new(),
        },
        Grid {
            name: "grad_norm_euclidean",
            values: Vec::new(),
        },
        Grid {
            name: "grad_norm_riemannian",
            values: Vec::new(),
        },
        Grid {
            name: "hessian_trace_euclidean",
            values: Vec::new(),
        },
        Grid {
            name: "hessian_trace_riemannian",
            values: Vec::new(),
        },
    ];
    for i in 0..points {
        for j in 0..points {
            let theta1 = coord(i);
            let theta2 = coord(j);
            let p = ScalarParams::new(theta1, theta2);
            let on_axis = theta1 == 0.0 || theta2 == 0.0;
            let loss = scalar_dataset_loss(p, &data);
            let (g2, g1) = scalar_dataset_grad(p, &data);
            let egrad_norm = (g2 * g2 + g1 * g1).sqrt();
            let etrace = scalar_dataset_hessian(p, &data).trace();
            grids[0].values.push(Some(loss));
            grids[1].values.push(Some(egrad_norm));
            if on_axis {
                grids[2].values.push(None);
                grids[4].values.push(None);
            } else {
                // Riemannian gradient norm: sqrt(theta2^2 g2^2 + theta1^2 g1^2).
                let rgrad_norm = (theta2 * theta2 * g2 * g2 + theta1 * theta1 * g1 * g1).sqrt();
                grids[2].values.push(Some(rgrad_norm));
                grids[4]
                    .values
                    .push(Some(riemannian_trace_oracle(p, &data)));
            }
            grids[3].values.push(Some(etrace));
        }
    }

    let grids_dir = out_dir.join("grids");
    let mut files: Vec<PathBuf> = Vec::new();
    for grid in &grids {
        let finite: Vec<f64> = grid.values.iter().flatten().cloned().collect();
        let lo = finite.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        let mut table = CsvTable::new(&["theta1", "theta2", "value", "raw"]);
        for i in 0..points {
            for j in 0..points {
                let raw = grid.values[i * points + j];
                let normalized = raw.map(|v| if span > 0.0 { (v - lo) / span } else { 0.0 });
                table.push(vec![
                    coord(i).into(),
                    coord(j).into(),
                    normalized.map(Cell::Float).unwrap_or(Cell::Missing),
                    raw.map(Cell::Float).unwrap_or(Cell::Missing),
                ]);
            }
        }
        let path = grids_dir.join(format!("{}.csv", grid.name));
        table.write(&path)?;
        files.push(path);
    }

    let summary = json!({
        "experiment": "scalar-demo",
        "version": CRATE_VERSION,
        "seed": cfg.seed,
        "config": config_echo(cfg),
        "grid_points": points,
        "data": data,
    });
    let summary_path = out_dir.join("summary.json");
    write_json(&summary_path, &summary)?;
    files.push(summary_path);

    Ok(RunArtifacts {
        summary,
        files,
        output_dir: out_dir,
    })
}
