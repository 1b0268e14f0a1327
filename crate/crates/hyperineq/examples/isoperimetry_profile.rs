//! Dimension-free isoperimetric constant for `nu_alpha` and the exact one-dimensional profile.
use hyperineq::isoperimetry::{bobkov_profile, dimension_free_for_nu_alpha, l_alpha, nu_alpha};

fn main() -> hyperineq::Result<()> {
    for alpha in [1.0, 1.5, 2.0] {
        let r = dimension_free_for_nu_alpha(alpha)?;
        let prof = bobkov_profile(&nu_alpha(alpha)?)?;
        println!("alpha {alpha}: K = {:.5} (K1 {:.4}, K3 {:.4}, c_p {:.4})", r.k, r.k1, r.k3, r.c_p);
        for t in [0.001, 0.01, 0.1, 0.5] {
            println!("  t {t:>6}: I(t) {:>10.6}  K L_alpha(t) {:>10.6}", prof.eval(t), r.k * l_alpha(alpha, t));
        }
    }
    Ok(())
}
