use hyperineq::error::Error;
use hyperineq::fgrowth::{beta_of, FGrowth};
use hyperineq::hardy_criteria::{beckner_b, phi_sobolev_d, poincare_b, rosen_d};
use hyperineq::line_measure::{LineMeasure, Potential};
use statrs::distribution::{ContinuousCDF, Normal};

fn laplace() -> LineMeasure {
    LineMeasure::new(Potential::abs_power(1.0, 1.0).unwrap(), 1.0).unwrap()
}

fn gaussian() -> LineMeasure {
    LineMeasure::new(Potential::abs_power(2.0, 0.5).unwrap(), 1.0).unwrap()
}

#[test]
fn gaussian_cdf_matches_reference() {
    let m = gaussian();
    let n = Normal::new(0.0, 1.0).unwrap();
    for x in [-4.0, -1.5, -0.2, 0.0, 0.7, 2.0, 5.0] {
        assert!((m.cdf(x) - n.cdf(x)).abs() < 1e-9, "x={x}");
    }
    assert!((m.upper_tail(6.0) / n.sf(6.0) - 1.0).abs() < 1e-6);
}

#[test]
fn exponential_poincare_weight() {
    // The weight is 1 - e^{-x}, so B = 1 and C_P = 4 sits at the top of [B, 4B].
    let b = poincare_b(&laplace()).unwrap();
    assert!((b.constant - 1.0).abs() < 1e-4, "{}", b.constant);
    assert!(b.bracket_lo <= 4.0 && 4.0 <= b.bracket_hi);
}

#[test]
fn slow_potential_has_no_poincare() {
    let m = LineMeasure::new(Potential::abs_power(0.5, 1.0).unwrap(), 1.0).unwrap();
    assert!(matches!(poincare_b(&m), Err(Error::UnboundedSupremum(_))));
}

#[test]
fn exponential_law_has_no_log_sobolev() {
    assert!(matches!(phi_sobolev_d(&laplace(), &FGrowth::Log), Err(Error::UnboundedSupremum(_))));
    assert!(matches!(rosen_d(&laplace(), 1.0), Err(Error::UnboundedSupremum(_))));
}

#[test]
fn beckner_constants_do_not_increase_in_p() {
    for m in [gaussian(), LineMeasure::new(Potential::u_alpha(1.5).unwrap(), 2.0).unwrap()] {
        let mut prev = f64::INFINITY;
        for p in [1.01, 1.2, 1.4, 1.6, 1.8, 1.99] {
            let b = beckner_b(&m, p).unwrap().constant;
            assert!(b <= prev * (1.0 + 1e-9), "p={p}: {b} > {prev}");
            prev = b;
        }
    }
}

#[test]
fn rosen_on_nu_alpha_stays_bounded() {
    let ds: Vec<f64> = [1.1, 1.3, 1.5, 1.7, 1.9, 2.0]
        .iter()
        .map(|&a| rosen_d(&LineMeasure::new(Potential::u_alpha_closed(a), 2.0).unwrap(), beta_of(a)).unwrap().constant)
        .collect();
    let (lo, hi) = ds.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &d| (l.min(d), h.max(d)));
    assert!(lo > 0.0 && hi / lo < 10.0, "{ds:?}");
}

#[test]
fn brackets_contain_the_constant() {
    let m = gaussian();
    let r = poincare_b(&m).unwrap();
    assert!(r.bracket_lo <= 1.0 && 1.0 <= r.bracket_hi, "{r:?}");
}
