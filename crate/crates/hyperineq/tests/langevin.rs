use hyperineq::langevin_lab::{feynman_kac_weight, simulate_pt, well_envelope, Diffusion, TrajectoryBatch, WellMethodParams};

#[test]
fn ornstein_uhlenbeck_mean() {
    let d = Diffusion::quadratic(1).unwrap();
    let batch = TrajectoryBatch { seed: 5, h: 1e-3, n_traj: 20_000 };
    for (x, t) in [(1.0, 0.3), (-2.0, 0.8)] {
        let e = simulate_pt(&d, &|y: &[f64]| y[0], &[x], t, &batch).unwrap();
        let want = x * (-2.0f64 * t).exp();
        for est in [e.direct, e.girsanov] {
            assert!((est.mean - want).abs() < 4.0 * est.stderr + 1e-3, "x={x} t={t}: {est:?} vs {want}");
        }
    }
}

#[test]
fn weight_is_seed_deterministic() {
    let d = Diffusion::u_alpha(1.5, 2).unwrap();
    let batch = TrajectoryBatch { seed: 9, h: 2e-3, n_traj: 500 };
    let a = feynman_kac_weight(&d, &[0.5, -0.3], 0.4, &batch).unwrap();
    let b = feynman_kac_weight(&d, &[0.5, -0.3], 0.4, &batch).unwrap();
    assert_eq!(a, b);
}

#[test]
fn weight_under_envelope() {
    let alpha = 1.5;
    let d = Diffusion::u_alpha(alpha, 1).unwrap();
    let p = WellMethodParams::standard(alpha, 1).unwrap();
    let batch = TrajectoryBatch { seed: 3, h: 1e-3, n_traj: 4000 };
    for x in [0.5, 1.5, 3.0] {
        let e = feynman_kac_weight(&d, &[x], 0.5, &batch).unwrap();
        assert!(e.mean - 4.0 * e.stderr <= well_envelope(&p, &[x], 0.5), "x={x}");
    }
}

#[test]
fn rejects_bad_batches() {
    let d = Diffusion::quadratic(1).unwrap();
    let bad = TrajectoryBatch { seed: 0, h: 0.0, n_traj: 10 };
    assert!(feynman_kac_weight(&d, &[0.0], 1.0, &bad).is_err());
}
