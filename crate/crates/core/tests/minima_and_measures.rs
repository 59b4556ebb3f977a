//! Checks at trained minima: the closed-form Hessian against finite
//! differences, orbit invariance of the geodesic measures, and their
//! monotonicity in the radius.

use geosharp::models::{
    diagonal_hessian_at_min, diagonal_loss, generate_whitened_regression, train_diagonal,
    DiagonalParams,
};
use geosharp::numerics::{DenseMatrix, SeededRng};
use geosharp::sharpness::{diagonal_geodesic_sharpness, DiagonalGeodesicOptions, SharpnessConfig};

#[test]
fn hessian_at_minimum_matches_finite_differences() {
    let mut rng = SeededRng::new(61, 0);
    let data = generate_whitened_regression(18, 8, 0.25, &mut rng).unwrap();
    let trained = train_diagonal(&data, 5e-2, 0.4, 1e-16, 400_000, &mut rng).unwrap();
    assert!(trained.converged, "final loss {}", trained.final_loss);
    let p = trained.params;
    let closed = diagonal_hessian_at_min(&p, &data).unwrap();

    // Central-difference Hessian of the loss over the flattened (u, v).
    let w = p.flatten();
    let dim = w.len();
    let step = 1e-5;
    let loss_at = |w: &[f64]| diagonal_loss(&DiagonalParams::from_flat(w), &data).unwrap();
    let mut fd = DenseMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut pp = w.clone();
            let mut pm = w.clone();
            let mut mp = w.clone();
            let mut mm = w.clone();
            pp[i] += step;
            pp[j] += step;
            pm[i] += step;
            pm[j] -= step;
            mp[i] -= step;
            mp[j] += step;
            mm[i] -= step;
            mm[j] -= step;
            fd[(i, j)] =
                (loss_at(&pp) - loss_at(&pm) - loss_at(&mp) + loss_at(&mm)) / (4.0 * step * step);
        }
    }
    let scale = fd.max_abs().max(1.0);
    let gap = closed.sub(&fd).max_abs() / scale;
    assert!(gap <= 1e-4, "closed-form vs FD Hessian relative gap {gap}");
    // And the trace identity 2 sum(u^2 + v^2).
    let expected: f64 = 2.0 * p.u.iter().chain(&p.v).map(|x| x * x).sum::<f64>();
    assert!((closed.trace() - expected).abs() <= 1e-10 * expected.abs());
}

#[test]
fn diagonal_measures_are_orbit_invariant() {
    let mut rng = SeededRng::new(62, 0);
    let data = generate_whitened_regression(24, 10, 0.3, &mut rng).unwrap();
    let params = DiagonalParams::new(
        (0..10)
            .map(|_| rng.uniform(0.5, 1.5) * rng.sign())
            .collect(),
        (0..10)
            .map(|_| rng.uniform(0.5, 1.5) * rng.sign())
            .collect(),
    );
    let cfg = SharpnessConfig::new(0.02);
    for options in [
        DiagonalGeodesicOptions::inv_default(),
        DiagonalGeodesicOptions::mix_default(),
    ] {
        let base =
            diagonal_geodesic_sharpness(&params, &data, &options, &cfg, &SeededRng::new(62, 10))
                .unwrap()
                .value;
        for trial in 0..5u64 {
            let mut move_rng = SeededRng::new(63 + trial, 0);
            let scales: Vec<f64> = (0..10)
                .map(|_| move_rng.uniform(0.3, 3.0) * move_rng.sign())
                .collect();
            let moved = DiagonalParams::new(
                params.u.iter().zip(&scales).map(|(&u, &a)| u * a).collect(),
                params.v.iter().zip(&scales).map(|(&v, &a)| v / a).collect(),
            );
            let value =
                diagonal_geodesic_sharpness(&moved, &data, &options, &cfg, &SeededRng::new(62, 10))
                    .unwrap()
                    .value;
            let gap = (value - base).abs() / base.abs().max(1e-12);
            assert!(
                gap <= 0.02,
                "{:?} trial {trial}: {value} vs {base}",
                options.kind
            );
        }
    }
}

#[test]
fn diagonal_measures_nondecreasing_in_radius() {
    let mut rng = SeededRng::new(64, 0);
    let data = generate_whitened_regression(24, 10, 0.3, &mut rng).unwrap();
    let params = DiagonalParams::new(
        (0..10)
            .map(|_| rng.uniform(0.5, 1.5) * rng.sign())
            .collect(),
        (0..10)
            .map(|_| rng.uniform(0.5, 1.5) * rng.sign())
            .collect(),
    );
    for options in [
        DiagonalGeodesicOptions::inv_default(),
        DiagonalGeodesicOptions::mix_default(),
    ] {
        let mut last = 0.0f64;
        for rho in [0.005, 0.01, 0.02, 0.04, 0.08] {
            let cfg = SharpnessConfig::new(rho);
            let value =
                diagonal_geodesic_sharpness(&params, &data, &options, &cfg, &SeededRng::new(64, 5))
                    .unwrap()
                    .value;
            assert!(
                value >= last * 0.99,
                "{:?} at rho {rho}: {value} < previous {last}",
                options.kind
            );
            last = value;
        }
    }
}
