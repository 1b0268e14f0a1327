use hyperineq::gross_schedule::{integrate_schedule, SobolevBudget};
use proptest::prelude::*;

#[test]
fn log_sobolev_schedule_is_exponential() {
    for c in [0.5, 1.0, 3.0] {
        let s = integrate_schedule(&SobolevBudget::log_sobolev(2.0, c).unwrap(), 2.0).unwrap();
        for t in [0.1, 0.7, 1.3, 2.0] {
            let want = (2.0 * t / c).exp() - 1.0;
            assert!((s.q_at(t) - want).abs() < 1e-7 * want.max(1.0), "c={c} t={t}");
            assert!((s.prefactor(t) - 1.0).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn f_alpha_schedule_is_linear(alpha in 1.05f64..2.0, c_f in 0.2f64..5.0, c_tilde in 0.0f64..3.0, t in 0.01f64..1.0) {
        let p = 2.0;
        let s = integrate_schedule(&SobolevBudget::f_alpha(alpha, p, c_f, c_tilde).unwrap(), 1.0).unwrap();
        let k = (5.0 - 4.0 / alpha).min(2.0);
        let q = k * t / c_f;
        prop_assert!((s.q_at(t) - q).abs() < 1e-9 * q.max(1.0));
        prop_assert!((s.prefactor(t).ln() - (1.0 + c_tilde) * q / p).abs() < 1e-6 * q.max(1.0));
    }

    #[test]
    fn schedule_is_monotone(c in 0.2f64..5.0) {
        let s = integrate_schedule(&SobolevBudget::log_sobolev(2.0, c).unwrap(), 3.0).unwrap();
        prop_assert!(s.nodes.windows(2).all(|w| w[1].q >= w[0].q && w[1].t > w[0].t));
    }
}
