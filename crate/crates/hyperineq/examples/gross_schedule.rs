//! Orlicz index schedules `q(t)`, `tau_q = x^p F^q`, for the log-Sobolev and `F_alpha` budgets.
use hyperineq::gross_schedule::{integrate_schedule, SobolevBudget};

fn main() -> hyperineq::Result<()> {
    let budgets = [("log-Sobolev, C=1", SobolevBudget::log_sobolev(2.0, 1.0)?), ("F_1.5, C_F=1", SobolevBudget::f_alpha(1.5, 2.0, 1.0, 0.5)?)];
    for (name, b) in &budgets {
        let s = integrate_schedule(b, 3.0)?;
        println!("{name}");
        println!("  {:>6} {:>14} {:>12}", "t", "q(t)", "prefactor");
        for (t, q, r) in s.dump(7) {
            println!("  {t:>6.2} {q:>14.5} {r:>12.5}");
        }
    }
    Ok(())
}
