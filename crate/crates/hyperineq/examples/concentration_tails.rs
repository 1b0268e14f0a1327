//! Tail bounds derived from the convex rate `Phi(t) = t^alpha`.
use hyperineq::concentration::{convex_rate_envelope, selfconsistency_cc, ConvexRate};

fn main() -> hyperineq::Result<()> {
    let phi = ConvexRate::power(1.5, 1.0);
    let sc = selfconsistency_cc(&phi)?;
    println!("C_T <= {:.4}, K(x) max {:.4} (within 4: {})", sc.c_t_upper, sc.k_max, sc.k_within_four);
    let env = convex_rate_envelope(&phi, sc.c_t_upper)?;
    for t in [1.0, 2.0, 4.0, 8.0, 16.0] {
        let r = env.tail_bound(t);
        println!("t = {t:>5}: {r:?}");
    }
    Ok(())
}
