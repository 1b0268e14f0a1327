//! Capacity-type criterion constants for `nu_alpha` across the family.
//! `D_phi` uses `phi = log^beta` with `beta = 2(1 - 1/alpha)`.
use hyperineq::fgrowth::{beta_of, FGrowth};
use hyperineq::hardy_criteria::{beckner_b, phi_sobolev_d, poincare_b, rosen_d};
use hyperineq::line_measure::{LineMeasure, Potential};

fn main() -> hyperineq::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>12} {:>12}", "alpha", "B", "B(1.5)", "D_phi", "D_rosen", "K*D");
    for alpha in [1.0, 1.25, 1.5, 1.75, 2.0] {
        let nu = LineMeasure::new(Potential::u_alpha_closed(alpha), 2.0)?;
        let b = poincare_b(&nu)?;
        let bp = beckner_b(&nu, 1.5)?;
        let rosen = match rosen_d(&nu, beta_of(alpha)) {
            Ok(r) => format!("{:>12.5} {:>12.5}", r.constant, r.extras["K_times_D"]),
            Err(_) => format!("{:>12} {:>12}", "n/a", "n/a"),
        };
        let dlog = phi_sobolev_d(&nu, &FGrowth::LogBeta { beta: beta_of(alpha).max(0.05) }).map(|r| format!("{:.5}", r.constant)).unwrap_or_else(|_| "inf".into());
        println!(
            "{alpha:>6.2} {:>10.5} {:>10.5} {dlog:>10} {rosen}",
            b.constant, bp.constant
        );
    }
    Ok(())
}
