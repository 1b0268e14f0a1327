//! Monte Carlo Feynman-Kac weight against its analytic envelope.
use hyperineq::langevin_lab::{feynman_kac_weight, well_envelope, Diffusion, TrajectoryBatch, WellMethodParams};

fn main() -> hyperineq::Result<()> {
    let alpha = 1.5;
    let d = Diffusion::u_alpha(alpha, 1)?;
    let p = WellMethodParams::standard(alpha, 1)?;
    let batch = TrajectoryBatch { seed: 7, h: 1e-3, n_traj: 4000 };
    println!("{:>5} {:>6} {:>12} {:>10} {:>10}", "x", "t", "E[M_t]", "stderr", "envelope");
    for x in [0.5, 1.0, 2.0] {
        for t in [0.25, 1.0] {
            let e = feynman_kac_weight(&d, &[x], t, &batch)?;
            println!("{x:>5.2} {t:>6.2} {:>12.5} {:>10.5} {:>10.4}", e.mean, e.stderr, well_envelope(&p, &[x], t));
        }
    }
    Ok(())
}
