//! Acceptance suite: one test per criterion, each printing a pass line
//! with the measured quantities at its stated tolerance.
//!
//! Run with `cargo test -p geosharp-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use geosharp::geometry::{
    geodesic_step, horizontality_residual, metric_inner, project_horizontal, riemannian_gradient,
    vertical_generator, FactorPair, Metric, MetricKind, OrbitCurve, TangentPair,
};
use geosharp::models::{
    check_gl_gradient_constraint, check_gl_gradient_constraint_diag, check_local_constraints,
    diagonal_grad, diagonal_loss, generate_classification_batch, generate_sparse_regression,
    generate_whitened_regression, matrixnet_grad, matrixnet_loss, scalar_dataset_loss,
    scalar_euclidean_grad, scalar_euclidean_hessian, scalar_loss, DiagonalParams, MatrixNetParams,
    ScalarParams, SymmetryKind,
};
use geosharp::numerics::{
    kendall_tau, sample_gl_matrix, sylvester_residual, sylvester_solve, DenseMatrix, SeededRng,
};
use geosharp::sharpness::{
    adaptive_sharpness_worst, diagonal_geodesic_sharpness, diagonal_sharpness_closed_form,
    scalar_geodesic_sharpness, scalar_sharpness_closed_form, DiagonalGeodesicOptions,
    SharpnessConfig,
};
use geosharp::trace::{
    euclidean_hessian_operator, exact_trace, hutchinson, hutchpp, riemannian_hessian_operator,
    FnOperator, LinearOperator,
};
use geosharp_cli::{parse_config, run_diag_corr, run_orbit_trace};

fn random_point(n: usize, m: usize, h: usize, rng: &mut SeededRng) -> FactorPair {
    let g = DenseMatrix::from_fn(n, h, |i, j| rng.normal() + if i == j { 2.0 } else { 0.0 });
    let hm = DenseMatrix::from_fn(m, h, |i, j| rng.normal() + if i == j { 2.0 } else { 0.0 });
    FactorPair::new(g, hm)
}

fn random_tangent(point: &FactorPair, rng: &mut SeededRng) -> TangentPair {
    TangentPair::new(
        DenseMatrix::from_fn(point.g.rows(), point.g.cols(), |_, _| rng.normal()),
        DenseMatrix::from_fn(point.h.rows(), point.h.cols(), |_, _| rng.normal()),
    )
}

/// Criterion 1: scalar analytic suite. Closed-form derivatives match
/// finite differences (rel <= 1e-6); the Riemannian gradient norm is
/// orbit-invariant (rel variation <= 1e-8) while the Euclidean one moves
/// by >= 10% at alpha = 2; projection idempotence and vertical
/// annihilation <= 1e-10. Runs in well under a second.
#[test]
fn criterion_01_scalar_analytic_suite() {
    let start = std::time::Instant::now();
    let mut rng = SeededRng::new(101, 0);

    // Derivatives against central differences, 50 random instances.
    let step = 1e-5;
    for _ in 0..50 {
        let p = ScalarParams::new(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        let (x, y) = (rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        let (g2, g1) = scalar_euclidean_grad(p, x, y);
        let fd2 = (scalar_loss(ScalarParams::new(p.theta1, p.theta2 + step), x, y)
            - scalar_loss(ScalarParams::new(p.theta1, p.theta2 - step), x, y))
            / (2.0 * step);
        let fd1 = (scalar_loss(ScalarParams::new(p.theta1 + step, p.theta2), x, y)
            - scalar_loss(ScalarParams::new(p.theta1 - step, p.theta2), x, y))
            / (2.0 * step);
        let scale = g2.abs().max(g1.abs()).max(1.0);
        assert!(
            (fd2 - g2).abs() <= 1e-6 * scale,
            "grad theta2: {fd2} vs {g2}"
        );
        assert!(
            (fd1 - g1).abs() <= 1e-6 * scale,
            "grad theta1: {fd1} vs {g1}"
        );

        let h = scalar_euclidean_hessian(p, x, y);
        let hscale = h.max_abs().max(1.0);
        let gfd = |t1: f64, t2: f64| scalar_euclidean_grad(ScalarParams::new(t1, t2), x, y);
        let col2 = (
            (gfd(p.theta1, p.theta2 + step).0 - gfd(p.theta1, p.theta2 - step).0) / (2.0 * step),
            (gfd(p.theta1, p.theta2 + step).1 - gfd(p.theta1, p.theta2 - step).1) / (2.0 * step),
        );
        let col1 = (
            (gfd(p.theta1 + step, p.theta2).0 - gfd(p.theta1 - step, p.theta2).0) / (2.0 * step),
            (gfd(p.theta1 + step, p.theta2).1 - gfd(p.theta1 - step, p.theta2).1) / (2.0 * step),
        );
        assert!((col2.0 - h[(0, 0)]).abs() <= 1e-6 * hscale);
        assert!((col2.1 - h[(1, 0)]).abs() <= 1e-6 * hscale);
        assert!((col1.0 - h[(0, 1)]).abs() <= 1e-6 * hscale);
        assert!((col1.1 - h[(1, 1)]).abs() <= 1e-6 * hscale);
    }

    // Orbit invariance of the Riemannian gradient norm on 5 random orbits.
    let metric = Metric::inv();
    let data: Vec<(f64, f64)> = (0..4)
        .map(|_| (rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)))
        .collect();
    let mut max_riem_variation = 0.0f64;
    let mut min_euclid_move_at_2 = f64::INFINITY;
    for _ in 0..5 {
        // Keep theta1 / theta2 away from 2, where the alpha = 2 Euclidean
        // norms tie by coincidence (f(alpha) = theta1^2/alpha^2 +
        // alpha^2 theta2^2 has f(2) = f(1) exactly on that ray).
        let theta2 = rng.uniform(0.4, 1.8);
        let theta1 = theta2 * rng.uniform(0.5, 1.5);
        let p0 = ScalarParams::new(theta1, theta2);
        let norms_at = |p: ScalarParams| -> (f64, f64) {
            let egrad = geosharp::models::scalar_grad_tangent(p, &data);
            let fp = p.to_factor_pair();
            let rgrad = riemannian_gradient(&metric, &fp, &egrad).unwrap();
            let riem_sq = metric_inner(&metric, &fp, &rgrad, &rgrad).unwrap();
            (riem_sq, egrad.euclidean_norm())
        };
        let (riem0, euclid0) = norms_at(p0);
        for alpha in [0.5, 0.8, 1.25, 2.0, 3.0] {
            let moved = p0.rescaled(alpha);
            let (riem, euclid) = norms_at(moved);
            max_riem_variation =
                max_riem_variation.max((riem - riem0).abs() / riem0.abs().max(1e-300));
            if alpha == 2.0 {
                min_euclid_move_at_2 =
                    min_euclid_move_at_2.min((euclid - euclid0).abs() / euclid0.abs());
            }
        }
        // The squared Riemannian norm in closed form: theta2^2 g2^2 +
        // theta1^2 g1^2 (for one datum this is
        // 2 [2x(theta2 theta1 x - y)]^2 (theta2 theta1)^2).
        let (g2, g1) = geosharp::models::scalar_dataset_grad(p0, &data);
        let closed = p0.theta2 * p0.theta2 * g2 * g2 + p0.theta1 * p0.theta1 * g1 * g1;
        assert!((closed - riem0).abs() <= 1e-9 * riem0.max(1.0));
    }
    assert!(
        max_riem_variation <= 1e-8,
        "riemannian gradient norm varied by {max_riem_variation}"
    );
    assert!(
        min_euclid_move_at_2 >= 0.10,
        "euclidean gradient norm moved only {min_euclid_move_at_2} at alpha 2"
    );

    // Projector idempotence and vertical annihilation at scalar points.
    let mut max_idem = 0.0f64;
    let mut max_kill = 0.0f64;
    for _ in 0..20 {
        let p = FactorPair::scalar(rng.uniform(0.3, 2.0), rng.uniform(0.3, 2.0));
        let xi = TangentPair::scalar(rng.normal(), rng.normal());
        let once = project_horizontal(&metric, &p, &xi).unwrap();
        let twice = project_horizontal(&metric, &p, &once).unwrap();
        max_idem = max_idem.max(twice.sub(&once).euclidean_norm());
        let vertical = vertical_generator(&p, &DenseMatrix::scalar(rng.normal()));
        let killed = project_horizontal(&metric, &p, &vertical).unwrap();
        max_kill = max_kill.max(killed.euclidean_norm());
    }
    assert!(max_idem <= 1e-10, "idempotence residual {max_idem}");
    assert!(
        max_kill <= 1e-10,
        "vertical annihilation residual {max_kill}"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 01 PASS: scalar suite (riem variation {max_riem_variation:.2e}, euclid move {min_euclid_move_at_2:.3}, idem {max_idem:.2e}, kill {max_kill:.2e}, {elapsed:?})"
    );
}

fn trace_setup(seed: u64) -> (MatrixNetParams, geosharp::ClassificationBatch, DenseMatrix) {
    let mut rng = SeededRng::new(seed, 0);
    let (h, d_in, d_out, n) = (2usize, 64usize, 10usize, 128usize);
    let s1 = 1.0 / (d_in as f64).sqrt();
    let s2 = 1.0 / (h as f64).sqrt();
    let params = MatrixNetParams::new(
        DenseMatrix::from_fn(h, d_in, |_, _| s1 * rng.normal()),
        DenseMatrix::from_fn(d_out, h, |_, _| s2 * rng.normal()),
    );
    let batch = generate_classification_batch(n, d_in, d_out, &mut rng);
    let a = sample_gl_matrix(h, &mut rng);
    (params, batch, a)
}

/// Criterion 2: exact Riemannian Hessian traces are constant along the
/// orbit (relative range <= 1e-6 over alpha in {0.1, 0.5, 1, 2, 10}) while
/// the Euclidean trace range is at least 10x larger. Synthetic batch,
/// D_in = 64, D_out = 10, h = 2, N = 128. Runtime < 2 min.
#[test]
fn criterion_02_trace_invariance() {
    let start = std::time::Instant::now();
    let (params, batch, a) = trace_setup(202);
    let metric = Metric::inv();
    let curve = OrbitCurve::new(params.to_factor_pair(), a);
    let mut riem = Vec::new();
    let mut euclid = Vec::new();
    for alpha in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let moved = MatrixNetParams::from_factor_pair(&curve.point(alpha).unwrap());
        let r_op = riemannian_hessian_operator(&moved, &batch, metric).unwrap();
        riem.push(exact_trace(&r_op));
        let e_op = euclidean_hessian_operator(&moved, &batch);
        euclid.push(exact_trace(&e_op));
    }
    let rel_range = |v: &[f64]| -> f64 {
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        (max - min).abs() / v.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300)
    };
    let riem_range = rel_range(&riem);
    let euclid_range = rel_range(&euclid);
    assert!(
        riem_range <= 1e-6,
        "riemannian trace range {riem_range:.3e}"
    );
    assert!(
        euclid_range >= 10.0 * riem_range,
        "euclidean range {euclid_range:.3e} vs riemannian {riem_range:.3e}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "criterion 02 PASS: trace invariance (riemannian range {riem_range:.2e}, euclidean range {euclid_range:.2e}, {elapsed:?})"
    );
}

/// Criterion 3: with budget 100 and k = 20, the median (over 10
/// measurement seeds, each drawing a fresh net/batch/orbit and fresh
/// probes) relative error of Hutch++ on the Riemannian Hessian is at most
/// 1/3 of Hutchinson's at alpha in {0.1, 10}; on the Euclidean Hessian
/// the two medians differ by less than 3x. Runtime < 5 min.
///
/// Known red sub-check: the Euclidean comparison at alpha = 10 cannot
/// pass for this model family. There the Euclidean Hessian's W2 block
/// dominates by a factor alpha^4 and has rank <= h * D_out = k, so the
/// Hutch++ sketch captures essentially the whole operator: its deflated
/// tail error scales like alpha^-2 relative to the trace while Hutchinson's
/// does not, and the two medians end up ~1e4 apart (both tiny). Every
/// other sub-check passes with margin; the assertion is kept as stated.
#[test]
fn criterion_03_estimator_quality() {
    let start = std::time::Instant::now();
    let metric = Metric::inv();
    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        0.5 * (v[v.len() / 2] + v[(v.len() - 1) / 2])
    };
    // medians[(alpha index, operator)] = (hutchinson, hutch++)
    let mut medians = std::collections::BTreeMap::new();
    for (ai, alpha) in [0.1f64, 10.0].into_iter().enumerate() {
        let mut errs: std::collections::BTreeMap<&str, (Vec<f64>, Vec<f64>)> =
            std::collections::BTreeMap::new();
        for seed in 0..10u64 {
            let (params, batch, a) = trace_setup(3000 + seed);
            let curve = OrbitCurve::new(params.to_factor_pair(), a);
            let moved = MatrixNetParams::from_factor_pair(&curve.point(alpha).unwrap());
            let r_op = riemannian_hessian_operator(&moved, &batch, metric).unwrap();
            let e_op = euclidean_hessian_operator(&moved, &batch);
            let ops: [(&str, &dyn LinearOperator); 2] =
                [("riemannian", &r_op), ("euclidean", &e_op)];
            for (oi, (name, op)) in ops.into_iter().enumerate() {
                let exact = exact_trace(op);
                let mut r1 = SeededRng::new(9100 + seed, (ai * 2 + oi) as u64);
                let mut r2 = SeededRng::new(9200 + seed, (ai * 2 + oi) as u64);
                let h = hutchinson(op, 100, &mut r1);
                let hpp = hutchpp(op, 20, 100, &mut r2).unwrap();
                let entry = errs.entry(name).or_default();
                entry.0.push((exact - h.mean).abs() / exact.abs());
                entry.1.push((exact - hpp.mean).abs() / exact.abs());
            }
        }
        for (name, (eh, ehpp)) in errs {
            let mh = median(eh);
            let mhpp = median(ehpp);
            println!(
                "criterion 03 detail alpha {alpha}: {name} hutchinson {mh:.3e} vs hutch++ {mhpp:.3e}"
            );
            medians.insert((ai, name), (mh, mhpp));
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    for (ai, alpha) in [0.1f64, 10.0].into_iter().enumerate() {
        let (rh, rhpp) = medians[&(ai, "riemannian")];
        assert!(
            rhpp <= rh / 3.0,
            "alpha {alpha}: riemannian hutch++ median {rhpp:.3e} not <= 1/3 of hutchinson {rh:.3e}"
        );
    }
    println!("criterion 03 partial PASS: riemannian hutch++ <= 1/3 hutchinson at both alphas");
    for (ai, alpha) in [0.1f64, 10.0].into_iter().enumerate() {
        let (eh, ehpp) = medians[&(ai, "euclidean")];
        let ratio = (eh / ehpp).max(ehpp / eh);
        assert!(
            ratio < 3.0,
            "alpha {alpha}: euclidean medians differ by {ratio:.2}x ({eh:.3e} vs {ehpp:.3e}); \
             at alpha = 10 this is structural: the Euclidean Hessian is effectively rank <= k \
             there, so Hutch++ is exact to probe noise and beats Hutchinson by orders of \
             magnitude rather than matching it"
        );
    }
    println!("criterion 03 PASS: estimator quality ({elapsed:?})");
}

/// Criterion 4: the diagonal correlation experiment at its defaults (50
/// models, d = 200, 90% sparsity, default seed) lands tau_adaptive in
/// [-0.90, -0.40], tau_inv and tau_mix in [-0.95, -0.55], with the
/// geodesic measures at least as strongly correlated as the adaptive
/// one. Runtime < 10 min.
#[test]
fn criterion_04_diagonal_correlation() {
    let start = std::time::Instant::now();
    let dir = std::env::temp_dir().join(format!("geosharp-acc4-{}", std::process::id()));
    let cfg = parse_config(&format!(
        r#"{{"experiment":"diag-corr","seed":{},"output_dir":{:?}}}"#,
        geosharp_cli::config::DEFAULT_DIAG_CORR_SEED,
        dir.to_str().unwrap()
    ))
    .unwrap();
    let artifacts = run_diag_corr(&cfg).unwrap();
    let tau = &artifacts.summary["tau"];
    let (ta, ti, tm) = (
        tau["adaptive"].as_f64().unwrap(),
        tau["inv"].as_f64().unwrap(),
        tau["mix"].as_f64().unwrap(),
    );
    assert!(
        (-0.90..=-0.40).contains(&ta),
        "tau_adaptive {ta} outside [-0.90, -0.40]"
    );
    assert!(
        (-0.95..=-0.55).contains(&ti),
        "tau_inv {ti} outside [-0.95, -0.55]"
    );
    assert!(
        (-0.95..=-0.55).contains(&tm),
        "tau_mix {tm} outside [-0.95, -0.55]"
    );
    assert!(
        ti.abs() >= ta.abs(),
        "|tau_inv| {} < |tau_adaptive| {}",
        ti.abs(),
        ta.abs()
    );
    assert!(
        tm.abs() >= ta.abs(),
        "|tau_mix| {} < |tau_adaptive| {}",
        tm.abs(),
        ta.abs()
    );
    let _ = std::fs::remove_dir_all(&dir);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!(
        "criterion 04 PASS: diagonal correlation (tau adaptive {ta:.3}, inv {ti:.3}, mix {tm:.3}, {elapsed:?})"
    );
}

/// Criterion 5: on whitened diagonal instances (d = 20, n = 30) the
/// geodesic-sharpness optimizer matches the closed forms within 5% for
/// both metrics over 10 instances; the scalar optimizer matches the 1-D
/// grid oracle within 2%.
#[test]
fn criterion_05_closed_form_vs_optimizer() {
    let start = std::time::Instant::now();
    let rho = 0.02;
    let cfg = SharpnessConfig::new(rho);
    let mut worst_inv = 0.0f64;
    let mut worst_mix = 0.0f64;
    for instance in 0..10u64 {
        let mut rng = SeededRng::new(500 + instance, 0);
        let data = generate_whitened_regression(30, 20, 0.5, &mut rng).unwrap();
        let params = DiagonalParams::new(
            (0..20)
                .map(|_| rng.uniform(0.6, 1.4) * rng.sign())
                .collect(),
            (0..20)
                .map(|_| rng.uniform(0.6, 1.4) * rng.sign())
                .collect(),
        );
        let beta0 = params.beta();
        let beta_star: Vec<f64> = data.x.tr_matvec(&data.y);
        let run_rng = SeededRng::new(500 + instance, 99);
        let inv = diagonal_geodesic_sharpness(
            &params,
            &data,
            &DiagonalGeodesicOptions::inv_default(),
            &cfg,
            &run_rng,
        )
        .unwrap()
        .value;
        let inv_oracle =
            diagonal_sharpness_closed_form(MetricKind::Inv, &beta0, &beta_star, rho).unwrap();
        worst_inv = worst_inv.max((inv - inv_oracle).abs() / inv_oracle.abs());
        let mix = diagonal_geodesic_sharpness(
            &params,
            &data,
            &DiagonalGeodesicOptions::mix_default(),
            &cfg,
            &run_rng,
        )
        .unwrap()
        .value;
        let mix_oracle =
            diagonal_sharpness_closed_form(MetricKind::Mix, &beta0, &beta_star, rho).unwrap();
        worst_mix = worst_mix.max((mix - mix_oracle).abs() / mix_oracle.abs());
    }
    assert!(worst_inv <= 0.05, "inv worst relative gap {worst_inv}");
    assert!(worst_mix <= 0.05, "mix worst relative gap {worst_mix}");

    let mut worst_scalar = 0.0f64;
    for instance in 0..10u64 {
        let mut rng = SeededRng::new(600 + instance, 0);
        let p = ScalarParams::new(rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5));
        let (x, y) = (rng.uniform(0.5, 1.5), rng.uniform(-1.0, 1.0));
        let srho = 0.1;
        let scfg = SharpnessConfig::new(srho);
        let run_rng = SeededRng::new(600 + instance, 99);
        let got = scalar_geodesic_sharpness(p, &[(x, y)], &scfg, &run_rng)
            .unwrap()
            .value;
        let oracle = scalar_sharpness_closed_form(p.theta2, p.theta1, x, y, srho);
        worst_scalar = worst_scalar.max((got - oracle).abs() / oracle.abs().max(1e-12));
    }
    assert!(
        worst_scalar <= 0.02,
        "scalar worst relative gap {worst_scalar}"
    );
    println!(
        "criterion 05 PASS: closed form vs optimizer (inv {worst_inv:.4}, mix {worst_mix:.4}, scalar {worst_scalar:.4}, {:?})",
        start.elapsed()
    );
}

/// Criterion 6: with the Christoffel term zeroed and the |theta|-scaled
/// norm, geodesic sharpness equals adaptive sharpness bitwise for
/// identical seeds and schedules.
#[test]
fn criterion_06_reduction_theorem() {
    let mut worst = 0.0f64;
    for instance in 0..5u64 {
        let mut rng = SeededRng::new(700 + instance, 0);
        let data = generate_sparse_regression(15, 8, 0.25, 0.1, &mut rng);
        let params = DiagonalParams::new(
            (0..8).map(|_| rng.uniform(0.5, 1.5) * rng.sign()).collect(),
            (0..8).map(|_| rng.uniform(0.5, 1.5) * rng.sign()).collect(),
        );
        let cfg = SharpnessConfig::new(0.05);
        let run_rng = SeededRng::new(700 + instance, 42);
        let reduced = diagonal_geodesic_sharpness(
            &params,
            &data,
            &DiagonalGeodesicOptions::reduction_to_adaptive(),
            &cfg,
            &run_rng,
        )
        .unwrap();
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
        let adaptive = adaptive_sharpness_worst(&loss, &grad, &w0, &c, &cfg, &run_rng).unwrap();
        assert_eq!(
            reduced.argmax_direction, adaptive.argmax_direction,
            "trajectories diverged on instance {instance}"
        );
        worst = worst.max((reduced.value - adaptive.value).abs());
    }
    assert!(worst <= 1e-10, "value difference {worst}");
    println!(
        "criterion 06 PASS: reduction to adaptive sharpness is bitwise (max diff {worst:.1e})"
    );
}

/// Criterion 7: scaling either quotient metric by C in {0.1, 7} moves no
/// geodesic point and no projection output by more than 1e-12.
#[test]
fn criterion_07_metric_scaling_invariance() {
    let mut rng = SeededRng::new(800, 0);
    let mut worst = 0.0f64;
    for kind in [MetricKind::Inv, MetricKind::Mix] {
        for h in [1usize, 2, 4] {
            for _ in 0..5 {
                let point = random_point(h + 3, h + 2, h, &mut rng);
                let raw = random_tangent(&point, &mut rng);
                let base_metric = Metric::new(kind);
                let projected = project_horizontal(&base_metric, &point, &raw).unwrap();
                let stepped = geodesic_step(&base_metric, &point, &projected, 0.7).unwrap();
                for c in [0.1, 7.0] {
                    let scaled = Metric::new(kind).with_scale(c);
                    let p2 = project_horizontal(&scaled, &point, &raw).unwrap();
                    worst = worst.max(p2.sub(&projected).euclidean_norm());
                    let s2 = geodesic_step(&scaled, &point, &projected, 0.7).unwrap();
                    worst = worst
                        .max(s2.g.sub(&stepped.g).max_abs())
                        .max(s2.h.sub(&stepped.h).max_abs());
                }
            }
        }
    }
    assert!(worst <= 1e-12, "scaling moved outputs by {worst}");
    println!("criterion 07 PASS: metric scaling invariance (max move {worst:.1e})");
}

/// Criterion 8: loss symmetry and derivative constraints. For every
/// model, 20 random group elements change the loss by at most 1e-8
/// (relative); the gradient-generator orthogonality residual is <= 1e-8;
/// the diagonal rescale constraints hold to 1e-6 through HVPs.
#[test]
fn criterion_08_loss_symmetry_and_constraints() {
    let mut rng = SeededRng::new(900, 0);

    // Scalar model.
    let mut worst_scalar = 0.0f64;
    for _ in 0..20 {
        let p = ScalarParams::new(rng.uniform(0.4, 1.6), rng.uniform(0.4, 1.6));
        let data: Vec<(f64, f64)> = (0..3)
            .map(|_| (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
            .collect();
        let alpha = rng.uniform(0.3, 3.0) * rng.sign();
        let moved = ScalarParams::new(p.theta1 / alpha, p.theta2 * alpha);
        let l0 = scalar_dataset_loss(p, &data);
        let l1 = scalar_dataset_loss(moved, &data);
        worst_scalar = worst_scalar.max((l0 - l1).abs() / l0.abs().max(1.0));
    }
    assert!(
        worst_scalar <= 1e-8,
        "scalar loss symmetry {worst_scalar:.2e}"
    );

    // Diagonal model.
    let data = generate_sparse_regression(12, 6, 0.5, 0.1, &mut rng);
    let params = DiagonalParams::new(
        (0..6).map(|_| rng.uniform(0.5, 1.5) * rng.sign()).collect(),
        (0..6).map(|_| rng.uniform(0.5, 1.5) * rng.sign()).collect(),
    );
    let l0 = diagonal_loss(&params, &data).unwrap();
    let mut worst_diag = 0.0f64;
    for _ in 0..20 {
        let scales: Vec<f64> = (0..6).map(|_| rng.uniform(0.3, 3.0) * rng.sign()).collect();
        let moved = DiagonalParams::new(
            params.u.iter().zip(&scales).map(|(&u, &a)| u * a).collect(),
            params.v.iter().zip(&scales).map(|(&v, &a)| v / a).collect(),
        );
        let l1 = diagonal_loss(&moved, &data).unwrap();
        worst_diag = worst_diag.max((l0 - l1).abs() / l0.abs().max(1.0));
    }
    assert!(
        worst_diag <= 1e-8,
        "diagonal loss symmetry {worst_diag:.2e}"
    );
    let (g_u, g_v) = diagonal_grad(&params, &data).unwrap();
    let diag_residual =
        check_gl_gradient_constraint_diag(&params.u, &params.v, &g_u, &g_v).unwrap();
    assert!(
        diag_residual <= 1e-8,
        "diagonal generator residual {diag_residual:.2e}"
    );

    // Matrix net.
    let mut net_rng = SeededRng::new(901, 0);
    let net = MatrixNetParams::new(
        DenseMatrix::from_fn(2, 6, |_, _| 0.4 * net_rng.normal()),
        DenseMatrix::from_fn(3, 2, |_, _| 0.4 * net_rng.normal()),
    );
    let batch = generate_classification_batch(10, 6, 3, &mut net_rng);
    let l0 = matrixnet_loss(&net, &batch).unwrap();
    let mut worst_net = 0.0f64;
    for _ in 0..20 {
        let a = sample_gl_matrix(2, &mut net_rng);
        let moved =
            MatrixNetParams::from_factor_pair(&net.to_factor_pair().group_action(&a).unwrap());
        let l1 = matrixnet_loss(&moved, &batch).unwrap();
        worst_net = worst_net.max((l0 - l1).abs() / l0.abs().max(1.0));
    }
    assert!(
        worst_net <= 1e-8,
        "matrix net loss symmetry {worst_net:.2e}"
    );
    let grad = matrixnet_grad(&net, &batch).unwrap();
    let net_residual =
        check_gl_gradient_constraint(&net.to_factor_pair(), &net.direction_to_tangent(&grad))
            .unwrap();
    assert!(
        net_residual <= 1e-8,
        "matrix net generator residual {net_residual:.2e}"
    );

    // Diagonal rescale constraints through an FD Hessian-vector product.
    let w = params.flatten();
    let mut flat_grad = g_u.clone();
    flat_grad.extend_from_slice(&g_v);
    let mut hvp = |dir: &[f64]| -> Vec<f64> {
        let step = 1e-6;
        let offset = |sgn: f64| -> Vec<f64> {
            let t: Vec<f64> = w
                .iter()
                .zip(dir)
                .map(|(&a, &d)| a + sgn * step * d)
                .collect();
            let q = DiagonalParams::from_flat(&t);
            let (gu, gv) = diagonal_grad(&q, &data).unwrap();
            let mut g = gu;
            g.extend(gv);
            g
        };
        let plus = offset(1.0);
        let minus = offset(-1.0);
        plus.iter()
            .zip(&minus)
            .map(|(&a, &b)| (a - b) / (2.0 * step))
            .collect()
    };
    let mut worst_rescale = 0.0f64;
    for i in 0..6 {
        let report = check_local_constraints(
            SymmetryKind::Rescale,
            &w,
            (&[i], &[6 + i]),
            &flat_grad,
            &mut hvp,
        )
        .unwrap();
        worst_rescale = worst_rescale
            .max(report.gradient)
            .max(report.hessian_vector)
            .max(report.hessian_quadratic);
    }
    assert!(
        worst_rescale <= 1e-6,
        "rescale constraint residual {worst_rescale:.2e}"
    );
    println!(
        "criterion 08 PASS: loss symmetry (scalar {worst_scalar:.1e}, diag {worst_diag:.1e}, net {worst_net:.1e}), generator residuals (diag {diag_residual:.1e}, net {net_residual:.1e}), rescale {worst_rescale:.1e}"
    );
}

/// Criterion 9: numerics. Sylvester residual <= 1e-10 on 1000 random
/// instances; post-projection horizontality <= 1e-8 for inv and mix at
/// h in {1, 2, 4}; Hutchinson is probe-exact on diagonal operators;
/// Hutch++ is exact on rank <= k operators; the Kendall unit triple.
#[test]
fn criterion_09_numerics() {
    let start = std::time::Instant::now();
    // 1000 Sylvester instances across h in {1, 2, 4, 8}.
    let mut rng = SeededRng::new(1000, 0);
    let mut worst_sylvester = 0.0f64;
    for i in 0..1000 {
        let h = [1usize, 2, 4, 8][i % 4];
        let a = DenseMatrix::from_fn(h, h, |_, _| rng.normal())
            .add(&DenseMatrix::identity(h).scale(4.0));
        let b = DenseMatrix::from_fn(h, h, |_, _| rng.normal());
        let l = sylvester_solve(&a, &b).unwrap();
        worst_sylvester =
            worst_sylvester.max(sylvester_residual(&a, &b, &l) / b.frobenius_norm().max(1.0));
    }
    assert!(
        worst_sylvester <= 1e-10,
        "sylvester residual {worst_sylvester:.2e}"
    );

    // Horizontality after projection.
    let mut worst_horizontal = 0.0f64;
    for kind in [MetricKind::Inv, MetricKind::Mix] {
        let metric = Metric::new(kind);
        for h in [1usize, 2, 4] {
            for _ in 0..20 {
                let point = random_point(h + 3, h + 2, h, &mut rng);
                let xi = random_tangent(&point, &mut rng);
                let projected = project_horizontal(&metric, &point, &xi).unwrap();
                worst_horizontal =
                    worst_horizontal.max(horizontality_residual(&metric, &point, &projected));
            }
        }
    }
    assert!(
        worst_horizontal <= 1e-8,
        "horizontality residual {worst_horizontal:.2e}"
    );

    // Hutchinson on a diagonal operator: every probe exact.
    let entries = vec![2.0, -1.0, 0.5, 3.0, -0.25];
    let diag_op = FnOperator::new(5, move |x: &[f64]| {
        x.iter().zip(&entries).map(|(&xi, &e)| xi * e).collect()
    });
    let mut h_rng = SeededRng::new(1001, 0);
    let est = hutchinson(&diag_op, 50, &mut h_rng);
    assert_eq!(est.std, 0.0, "hutchinson std {}", est.std);
    assert!((est.mean - 4.25).abs() <= 1e-12);

    // Hutch++ exact on a rank-3 operator with k = 5.
    let mut lr_rng = SeededRng::new(1002, 0);
    let b = DenseMatrix::from_fn(16, 3, |_, _| lr_rng.normal());
    let low_rank = b.matmul_tr(&b);
    let lr_op = FnOperator::new(16, move |x: &[f64]| low_rank.matvec(x));
    let exact = exact_trace(&lr_op);
    let mut pp_rng = SeededRng::new(1003, 0);
    let est = hutchpp(&lr_op, 5, 30, &mut pp_rng).unwrap();
    let low_rank_err = (est.mean - exact).abs() / exact.abs();
    assert!(
        low_rank_err <= 1e-8,
        "hutch++ low-rank error {low_rank_err:.2e}"
    );

    // Kendall unit triple.
    assert_eq!(
        kendall_tau(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(),
        1.0
    );
    assert_eq!(
        kendall_tau(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(),
        -1.0
    );
    let tau = kendall_tau(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
    assert!((tau - 2.0 / 3.0).abs() < 1e-15);
    println!(
        "criterion 09 PASS: numerics (sylvester {worst_sylvester:.1e}, horizontality {worst_horizontal:.1e}, hutch++ low-rank {low_rank_err:.1e}, {:?})",
        start.elapsed()
    );
}

/// Criterion 10: determinism and parallel equivalence. Identical configs
/// produce byte-identical CSVs, and concurrent execution equals serial
/// execution.
#[test]
fn criterion_10_determinism_and_parallel_equivalence() {
    let base = std::env::temp_dir().join(format!("geosharp-acc10-{}", std::process::id()));
    let make_cfg = |dir: &str, jobs: usize| {
        parse_config(&format!(
            r#"{{"experiment":"diag-corr","seed":11,"d":40,"n":20,"n_models":12,"sparsity":0.5,
                "max_iters":60000,"n_iter":40,"restarts":2,"sharpness_batches":2,
                "lr_range":[2e-4,1e-3],"output_dir":{:?},"jobs":{jobs}}}"#,
            base.join(dir).to_str().unwrap()
        ))
        .unwrap()
    };
    let read =
        |dir: &str, file: &str| -> Vec<u8> { std::fs::read(base.join(dir).join(file)).unwrap() };

    run_diag_corr(&make_cfg("serial-a", 1)).unwrap();
    run_diag_corr(&make_cfg("serial-b", 1)).unwrap();
    assert_eq!(
        read("serial-a", "models.csv"),
        read("serial-b", "models.csv"),
        "re-run differs"
    );
    run_diag_corr(&make_cfg("parallel", 4)).unwrap();
    assert_eq!(
        read("serial-a", "models.csv"),
        read("parallel", "models.csv"),
        "parallel differs from serial"
    );

    // Orbit-trace rerun determinism, at reduced width.
    let ot_cfg = |dir: &str| {
        parse_config(&format!(
            r#"{{"experiment":"orbit-trace","seed":5,"d_in":16,"batch_size":24,"budget":30,
                "sketch":5,"alpha_grid":[0.5,1.0,2.0],"spectrum_alphas":[1.0],
                "relerr_alphas":[0.5],"output_dir":{:?}}}"#,
            base.join(dir).to_str().unwrap()
        ))
        .unwrap()
    };
    run_orbit_trace(&ot_cfg("ot-a")).unwrap();
    run_orbit_trace(&ot_cfg("ot-b")).unwrap();
    for file in ["trace_sweep.csv", "relerr_curves.csv", "spectra.csv"] {
        assert_eq!(read("ot-a", file), read("ot-b", file), "{file} differs");
    }
    let _ = std::fs::remove_dir_all(&base);
    println!("criterion 10 PASS: determinism and parallel/serial equivalence");
}
