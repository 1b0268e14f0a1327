use hyperineq::concentration::{convex_rate_envelope, selfconsistency_cc, ConvexRate};

#[test]
fn tails_decrease_and_stay_probabilities() {
    for alpha in [1.2, 1.5, 2.0] {
        let phi = ConvexRate::power(alpha, 1.0);
        let sc = selfconsistency_cc(&phi).unwrap();
        assert!(sc.k_within_four, "alpha={alpha}");
        let env = convex_rate_envelope(&phi, sc.c_t_upper).unwrap();
        let mut prev = 1.0;
        for t in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
            let b = env.tail_bound(t).bound;
            assert!((0.0..=1.0).contains(&b) && b <= prev * (1.0 + 1e-12), "alpha={alpha} t={t} {b}");
            prev = b;
        }
    }
}

#[test]
fn tail_decays_at_rate_phi() {
    let alpha = 1.5;
    let phi = ConvexRate::power(alpha, 1.0);
    let env = convex_rate_envelope(&phi, selfconsistency_cc(&phi).unwrap().c_t_upper).unwrap();
    // -log bound / Phi(t) stays bounded away from 0 and infinity for large t.
    let r: Vec<f64> = [16.0, 32.0, 64.0].iter().map(|&t| -env.tail_bound(t).bound.ln() / phi.eval(t)).collect();
    assert!(r.iter().all(|&x| x > 0.01 && x < 100.0), "{r:?}");
}
