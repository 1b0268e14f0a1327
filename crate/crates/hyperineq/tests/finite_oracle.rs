use hyperineq::fgrowth::FGrowth;
use hyperineq::finite_oracle::{
    capacity, golden_rho, hardy_fuzz, poincare_exact, verify_fsobcap, verify_hardy_reduction, verify_tensorization, FiniteSpace, Phi,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space(n: usize, seed: u64) -> FiniteSpace {
    FiniteSpace::random_connected(n, 0.3, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

#[test]
fn two_point_poincare() {
    for (p, c) in [(0.5, 1.0), (0.2, 3.0), (0.9, 0.4)] {
        let r = poincare_exact(&FiniteSpace::two_point(p, c).unwrap()).unwrap();
        assert!((r.c_p - p * (1.0 - p) / c).abs() < 1e-12, "p={p} c={c}");
    }
}

#[test]
fn single_edge_capacity() {
    // Cap({0}, {0}) on a path is the effective conductance to the complement: one edge.
    let s = FiniteSpace::path(4).unwrap();
    let r = capacity(&s, &[0], &[0]).unwrap();
    assert!((r.value - s.edges[0].c).abs() < 1e-12);
}

#[test]
fn product_gap_is_minimum_of_factors() {
    let (a, b) = (space(4, 1), space(3, 2));
    let p = FiniteSpace::product(&a, &b).unwrap();
    let ga = poincare_exact(&a).unwrap().gap;
    let gb = poincare_exact(&b).unwrap().gap;
    let gp = poincare_exact(&p).unwrap().gap;
    assert!((gp - ga.min(gb)).abs() < 1e-9 * gp);
}

#[test]
fn hardy_reduction_holds_on_random_graphs() {
    let f = hardy_fuzz(200, 8, 17).unwrap();
    assert_eq!(f.violations, 0, "{f:?}");
    assert!(f.worst_ratio >= 1.0 && f.worst_ratio <= hyperineq::finite_oracle::optimal_proof_factor());
}

#[test]
fn hardy_reduction_on_a_path() {
    let s = FiniteSpace::path(7).unwrap();
    let r = verify_hardy_reduction(&s, &[0, 1, 2], golden_rho()).unwrap();
    assert!(r.holds && r.b <= r.c && r.ratio <= r.proof_factor, "{r:?}");
}

#[test]
fn tensorization_of_variance() {
    let (a, b) = (space(3, 4), space(4, 5));
    let r = verify_tensorization(&a, &b, Phi::Variance, 300, 6).unwrap();
    assert_eq!(r.violations, 0, "{r:?}");
}

#[test]
fn fsobcap_on_small_graphs() {
    for seed in 0..5 {
        let r = verify_fsobcap(&space(5, seed), &FGrowth::LogBeta { beta: 1.0 }, None, 300, seed).unwrap();
        assert_eq!(r.violations, 0, "seed {seed}: {r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn capacity_is_monotone(seed in 0u64..10_000, n in 4usize..9, mask_a in 1u32..256, mask_grow in 0u32..256, mask_om in 0u32..256) {
        let s = space(n, seed);
        let full = (1u32 << n) - 1;
        let a: Vec<usize> = (0..n).filter(|i| (mask_a & full) >> i & 1 == 1).collect();
        prop_assume!(!a.is_empty() && a.len() < n);
        let a_big: Vec<usize> = (0..n).filter(|i| ((mask_a | mask_grow) & full) >> i & 1 == 1).collect();
        let omega: Vec<usize> = (0..n).filter(|i| ((mask_a | mask_grow | mask_om) & full) >> i & 1 == 1).collect();
        prop_assume!(omega.len() < n);
        let omega_small: Vec<usize> = a_big.clone();
        // A subset of A' gives Cap(A) <= Cap(A'); a larger outer set gives a smaller capacity.
        let c_a = capacity(&s, &a, &omega).unwrap().value;
        let c_big = capacity(&s, &a_big, &omega).unwrap().value;
        let c_tight = capacity(&s, &a, &omega_small).unwrap().value;
        prop_assert!(c_a <= c_big * (1.0 + 1e-9) + 1e-12);
        prop_assert!(c_a <= c_tight * (1.0 + 1e-9) + 1e-12);
    }
}
