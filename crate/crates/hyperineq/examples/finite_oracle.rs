//! Exact checks on small weighted graphs: capacities, spectral gap and the Hardy reduction.
use hyperineq::finite_oracle::{capacity_mu, golden_rho, poincare_exact, verify_hardy_reduction, FiniteSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyperineq::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let space = FiniteSpace::random_connected(8, 0.3, &mut rng)?;
    let gap = poincare_exact(&space)?;
    println!("spectral gap {:.6}, C_P {:.6}", gap.gap, gap.c_p);
    for a in [vec![0], vec![0, 1], vec![2, 5]] {
        let c = capacity_mu(&space, &a)?;
        println!("Cap_mu({a:?}) = {:.6} with outer set {:?}", c.value, c.outer);
    }
    let h = verify_hardy_reduction(&space, &[0, 1, 2, 3], golden_rho())?;
    println!("Hardy: B = {:.5}, C = {:.5}, C/B = {:.4} <= {:.4}: {}", h.b, h.c, h.ratio, h.proof_factor, h.holds);
    Ok(())
}
