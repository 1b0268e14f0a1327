//! Gauge norm, dual norm and tau-entropy of `f(x) = x` under `nu_alpha`.
use hyperineq::line_measure::{LineMeasure, Potential};
use hyperineq::orlicz::{gauge_norm, orlicz_dual_norm, tau_entropy, OrliczSample, YoungFunction, YoungPair};

fn main() -> hyperineq::Result<()> {
    let alpha = 1.5;
    let nu = LineMeasure::new(Potential::u_alpha(alpha)?, 2.0)?;
    let rule = nu.quantile_rule(400);
    let f = OrliczSample::from_fn(&rule, |x| x);
    for tau in [YoungFunction::power(2.0, 1.0)?, YoungFunction::example_pair_generator(alpha)?, YoungFunction::exp_square()] {
        let pair = YoungPair::new(tau)?;
        let (lo, hi) = pair.check_sandwich(&hyperineq::quad::logspace(1e-3, 1e3, 30))?;
        let show = |r: hyperineq::Result<f64>| r.map(|v| format!("{v:.6}")).unwrap_or_else(|e| format!("n/a ({e})"));
        let gauge = show(gauge_norm(&f, &pair));
        let dual = show(orlicz_dual_norm(&f, &pair).map(|d| d.value));
        let ent = show(tau_entropy(&f, &pair));
        println!("{}", pair.tau.tag());
        println!("  sandwich ratios in [{lo:.4}, {hi:.4}]");
        println!("  ||f||_2 = {:.6}  N_tau = {gauge}  dual >= {dual}  Ent_tau = {ent}", f.l2_norm());
    }
    Ok(())
}
