use hyperineq::fgrowth::FGrowth;
use hyperineq::line_measure::{LineMeasure, Potential};
use hyperineq::orlicz::{gauge_norm, orlicz_dual_norm, OrliczSample, YoungFunction, YoungPair};
use proptest::prelude::*;

fn brute_conjugate(tau: &YoungFunction, y: f64) -> f64 {
    // sup_x (xy - tau(x)) on a dense log grid, then a local refinement.
    let xs = hyperineq::quad::logspace(1e-6, 1e3, 20_000);
    let (mut best, mut at) = (0.0f64, 0.0);
    for &x in &xs {
        let v = x * y - tau.eval(x);
        if v > best {
            best = v;
            at = x;
        }
    }
    if at > 0.0 {
        let (_, v) = hyperineq::quad::golden_max(|x| x * y - tau.eval(x), at * 0.99, at * 1.01, 1e-14);
        best = best.max(v);
    }
    best
}

fn pairs() -> Vec<YoungPair> {
    vec![
        YoungPair::new(YoungFunction::power(2.0, 1.0).unwrap()).unwrap(),
        YoungPair::new(YoungFunction::power(1.5, 1.0).unwrap()).unwrap(),
        YoungPair::new(YoungFunction::example_pair_generator(1.5).unwrap()).unwrap(),
        YoungPair::new(YoungFunction::tau_q(2.0, 0.5, FGrowth::LogBeta { beta: 1.0 }).unwrap()).unwrap(),
    ]
}

#[test]
fn conjugate_matches_brute_force() {
    for pair in pairs() {
        for y in [0.01, 0.3, 1.0, 4.0, 25.0] {
            let exact = brute_conjugate(&pair.tau, y);
            let table = pair.tau_star.eval(y);
            assert!((table - exact).abs() <= 1e-6 * exact.max(1e-12), "{} y={y}: {table} vs {exact}", pair.tau.tag());
        }
    }
}

#[test]
fn power_two_gauge_is_l2() {
    let nu = LineMeasure::new(Potential::u_alpha(1.5).unwrap(), 2.0).unwrap();
    let rule = nu.quantile_rule(300);
    let f = OrliczSample::from_fn(&rule, |x| 1.0 + x * x);
    let pair = YoungPair::new(YoungFunction::power(2.0, 1.0).unwrap()).unwrap();
    let n = gauge_norm(&f, &pair).unwrap();
    assert!((n - f.l2_norm()).abs() < 1e-9 * n);
}

#[test]
fn dual_estimate_below_twice_gauge() {
    let nu = LineMeasure::new(Potential::u_alpha(1.5).unwrap(), 2.0).unwrap();
    let rule = nu.quantile_rule(300);
    let f = OrliczSample::from_fn(&rule, |x| x.abs().powf(1.5));
    for pair in pairs() {
        let n = gauge_norm(&f, &pair).unwrap();
        let d = orlicz_dual_norm(&f, &pair).unwrap().value;
        assert!(d > 0.0 && d <= 2.0 * n * (1.0 + 1e-6), "{}: dual {d} gauge {n}", pair.tau.tag());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn young_inequality(x in 1e-3f64..50.0, y in 1e-3f64..50.0, which in 0usize..4) {
        let pair = &pairs()[which];
        prop_assert!(pair.young_defect(&[(x, y)]) <= 1e-9);
    }

    #[test]
    fn inverse_sandwich(y in 1e-3f64..1e4, which in 0usize..4) {
        let pair = &pairs()[which];
        let r = pair.tau.inverse(y) * pair.tau_star.inverse(y) / y;
        prop_assert!((1.0 - 1e-6..=2.0 + 1e-6).contains(&r), "ratio {}", r);
    }

    #[test]
    fn gauge_is_homogeneous(c in 0.05f64..20.0, shift in -1.0f64..1.0) {
        let nu = LineMeasure::new(Potential::abs_power(2.0, 0.5).unwrap(), 1.0).unwrap();
        let rule = nu.quantile_rule(120);
        let f = OrliczSample::from_fn(&rule, |x| x + shift);
        let pair = YoungPair::new(YoungFunction::example_pair_generator(1.5).unwrap()).unwrap();
        let a = gauge_norm(&f.scale(c), &pair).unwrap();
        let b = c * gauge_norm(&f, &pair).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * b);
    }
}
