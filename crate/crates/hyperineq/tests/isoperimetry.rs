use hyperineq::isoperimetry::{bobkov_profile, dimension_free_for_nu_alpha, l_alpha, nu_alpha};
use hyperineq::line_measure::{LineMeasure, Potential};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

#[test]
fn gaussian_profile_matches_reference() {
    let m = LineMeasure::new(Potential::abs_power(2.0, 0.5).unwrap(), 1.0).unwrap();
    let prof = bobkov_profile(&m).unwrap();
    let n = Normal::new(0.0, 1.0).unwrap();
    for t in [1e-4, 0.01, 0.2, 0.5, 0.9] {
        let want = n.pdf(n.inverse_cdf(t));
        assert!((prof.eval(t) - want).abs() < 1e-7 * want.max(1e-3), "t={t}");
    }
    assert!(prof.asymmetry(101) < 1e-8);
}

#[test]
fn dimension_free_constant_lies_below_exact_profile() {
    for alpha in [1.0, 1.3, 1.5, 1.8, 2.0] {
        let r = dimension_free_for_nu_alpha(alpha).unwrap();
        assert!(r.k > 0.0);
        let prof = bobkov_profile(&nu_alpha(alpha).unwrap()).unwrap();
        for i in 1..200 {
            let t = i as f64 / 200.0;
            assert!(r.k * l_alpha(alpha, t) <= prof.eval(t) * (1.0 + 1e-9), "alpha={alpha} t={t}");
        }
    }
}
