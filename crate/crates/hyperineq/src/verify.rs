//! The acceptance battery: fifteen numbered checks with machine-readable results.

use crate::error::{Error, Result};
use crate::fgrowth::{beta_of, check_c1c2_beta, FGrowth};
use crate::finite_oracle::{self, FiniteSpace, Phi};
use crate::gross_schedule::{integrate_schedule, SobolevBudget};
use crate::hardy_criteria::{poincare_b, rosen_d, ttilde, TFunction};
use crate::isoperimetry::{bobkov_profile, cheeger_lower, dimension_free_for_nu_alpha, l_alpha, nu_alpha};
use crate::langevin_lab::{feynman_kac_weight, integrability_threshold, simulate_pt, well_envelope, Diffusion, Psi, TrajectoryBatch, WellMethodParams};
use crate::line_measure::{LineMeasure, Potential};
use crate::orlicz::{gauge_norm, OrliczSample, YoungFunction, YoungPair};
use crate::quad;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const SCHEMA: &str = "hyperineq.verify/1";

/// Expected value of the Cheeger arithmetic check at `lambda = 1, t = 1/2`.
pub const CHEEGER_TARGET: f64 = 0.111749;

pub const CRITERIA: [(u32, &str); 15] = [
    (1, "orlicz fixed point"),
    (2, "duality sandwich"),
    (3, "exponential Muckenhoupt oracle"),
    (4, "T-tilde sandwich"),
    (5, "Rosen uniformity on nu_alpha"),
    (6, "log-Sobolev schedule recovery"),
    (7, "well-method envelope"),
    (8, "hyperboundedness threshold"),
    (9, "Ornstein-Uhlenbeck oracle"),
    (10, "isoperimetric cross-domination"),
    (11, "Cheeger arithmetic"),
    (12, "finite-oracle brackets"),
    (13, "tensorization"),
    (14, "F_alpha versus log certificates"),
    (15, "determinism"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteLevel {
    /// Monte Carlo checks run with ten times fewer trajectories.
    Quick,
    Full,
}

impl std::str::FromStr for SuiteLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(SuiteLevel::Quick),
            "full" => Ok(SuiteLevel::Full),
            _ => Err(Error::Config(format!("level must be quick or full, got {s:?}"))),
        }
    }
}

/// Multiplies the key computed value of one criterion by `factor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fault {
    pub criterion: u32,
    pub factor: f64,
}

impl std::str::FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (c, f) = s.split_once(':').ok_or_else(|| Error::Config(format!("fault must be criterion:factor, got {s:?}")))?;
        let criterion = c.trim().parse().map_err(|_| Error::Config(format!("bad criterion in {s:?}")))?;
        let factor = f.trim().parse().map_err(|_| Error::Config(format!("bad factor in {s:?}")))?;
        Ok(Fault { criterion, factor })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub level: SuiteLevel,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl SuiteOptions {
    pub fn new(level: SuiteLevel, seed: u64) -> Self {
        SuiteOptions { level, seed, fault: None }
    }

    fn inj(&self, id: u32, v: f64) -> f64 {
        match self.fault {
            Some(f) if f.criterion == id => v * f.factor,
            _ => v,
        }
    }

    fn trajectories(&self, full: usize) -> usize {
        match self.level {
            SuiteLevel::Full => full,
            SuiteLevel::Quick => (full / 10).max(1000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub values: BTreeMap<String, f64>,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!("[{}] criterion {:>2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub options: SuiteOptions,
    pub results: Vec<CriterionResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

type Outcome = Result<(bool, BTreeMap<String, f64>, String)>;

fn vals(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Runs one criterion; failures of the underlying computation count as a failed check.
pub fn run_criterion(id: u32, opts: &SuiteOptions) -> CriterionResult {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1).to_string();
    let out = match id {
        1 => c01_fixed_point(opts),
        2 => c02_sandwich(opts),
        3 => c03_exponential(opts),
        4 => c04_ttilde(opts),
        5 => c05_rosen(opts),
        6 => c06_gross(opts),
        7 => c07_well(opts),
        8 => c08_threshold(opts),
        9 => c09_ou(opts),
        10 => c10_isoperimetry(opts),
        11 => c11_cheeger(opts),
        12 => c12_finite(opts),
        13 => c13_tensor(opts),
        14 => c14_c1c2(opts),
        15 => c15_determinism(opts),
        _ => Err(Error::InvalidInput(format!("no criterion {id}"))),
    };
    match out {
        Ok((passed, values, detail)) => CriterionResult { id, name, passed, values, detail },
        Err(e) => CriterionResult { id, name, passed: false, values: BTreeMap::new(), detail: format!("error: {e}") },
    }
}

pub fn verify_suite(opts: &SuiteOptions) -> SuiteReport {
    verify_criteria(opts, &(1..=15).collect::<Vec<_>>())
}

pub fn verify_criteria(opts: &SuiteOptions, ids: &[u32]) -> SuiteReport {
    let results: Vec<CriterionResult> = ids.iter().map(|&id| run_criterion(id, opts)).collect();
    let passed = results.iter().filter(|r| r.passed).count();
    SuiteReport { schema: SCHEMA.into(), options: *opts, failed: results.len() - passed, passed, results }
}

/// The five Young functions used by the Orlicz checks.
pub fn young_corpus() -> Result<Vec<YoungFunction>> {
    Ok(vec![
        YoungFunction::power(2.0, 1.0)?,
        YoungFunction::power(1.5, 1.0)?,
        YoungFunction::power(3.0, 0.5)?,
        YoungFunction::tau_q(2.0, 0.5, FGrowth::LogBeta { beta: 1.0 })?,
        YoungFunction::example_pair_generator(1.5)?,
    ])
}

fn c01_fixed_point(o: &SuiteOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let n = 64;
    let w = Arc::new(vec![1.0 / n as f64; n]);
    let mut worst: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for tau in young_corpus()? {
        let pair = YoungPair::new(tau)?;
        let one = OrliczSample::new(vec![1.0; n], w.clone())?;
        unit = unit.max((o.inj(1, gauge_norm(&one, &pair)?) - 1.0).abs());
        for _ in 0..50 {
            let scale = 10f64.powf(rng.random_range(-2.0..2.0));
            let v: Vec<f64> = (0..n)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    scale * z
                })
                .collect();
            let f = OrliczSample::new(v, w.clone())?;
            let k = o.inj(1, gauge_norm(&f, &pair)?);
            worst = worst.max((f.modular(&pair.tau, k) - pair.tau.eval(1.0)).abs());
        }
    }
    let ok = worst <= 1e-6 && unit <= 1e-6;
    Ok((ok, vals(&[("max_residual", worst), ("max_unit_error", unit)]), format!("residual {worst:.2e}, |N(1)-1| {unit:.2e} (tol 1e-6)")))
}

fn c02_sandwich(o: &SuiteOptions) -> Outcome {
    let ys = quad::logspace(1e-3, 1e3, 40);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for tau in young_corpus()? {
        let pair = YoungPair::new(tau)?;
        for &y in &ys {
            let r = o.inj(2, pair.tau.inverse(y) * pair.tau_star.inverse(y)) / y;
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    let tol = crate::orlicz::SANDWICH_TOL;
    let ok = lo >= 1.0 - tol && hi <= 2.0 + 2.0 * tol;
    Ok((ok, vals(&[("min_ratio", lo), ("max_ratio", hi)]), format!("product/y in [{lo:.6}, {hi:.6}] (need [1, 2])")))
}

fn c03_exponential(o: &SuiteOptions) -> Outcome {
    let m = LineMeasure::new(Potential::abs_power(1.0, 1.0)?, 1.0)?;
    let r = poincare_b(&m)?;
    let b = o.inj(3, r.constant);
    let ok = (b - 1.0).abs() <= 1e-4 && b <= 4.0 && 4.0 <= 4.0 * b;
    Ok((ok, vals(&[("B", b), ("extremizer", r.extremizer)]), format!("B = {b:.8} (want 1 +- 1e-4), exact C_P = 4 in [{b:.4}, {:.4}]", 4.0 * b)))
}

fn c04_ttilde(o: &SuiteOptions) -> Outcome {
    let xs = quad::logspace(std::f64::consts::E, 1e6, 60);
    let mut violations = 0usize;
    let (mut lo_m, mut hi_m) = (f64::INFINITY, f64::INFINITY);
    for beta in [0.25, 0.5, 0.75, 1.0] {
        let t = TFunction::power(beta);
        for &x in &xs {
            let v = match ttilde(&t, x) {
                Ok(v) => o.inj(4, v),
                Err(Error::SandwichViolation(_)) => {
                    violations += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let upper = 1.0 / t.eval(1.0 / x.ln());
            let lower = upper / 3.0;
            lo_m = lo_m.min(v / lower - 1.0);
            hi_m = hi_m.min(1.0 - v / upper);
            if v < lower * (1.0 - 1e-9) || v > upper * (1.0 + 1e-9) {
                violations += 1;
            }
        }
    }
    Ok((
        violations == 0,
        vals(&[("violations", violations as f64), ("min_lower_margin", lo_m), ("min_upper_margin", hi_m)]),
        format!("{violations} violations over 4 x {} points", xs.len()),
    ))
}

fn c05_rosen(o: &SuiteOptions) -> Outcome {
    let mut v = BTreeMap::new();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for alpha in [1.1, 1.3, 1.5, 1.7, 1.9] {
        let d = o.inj(5, rosen_d(&nu_alpha(alpha)?, beta_of(alpha))?.constant);
        if !d.is_finite() {
            return Ok((false, v, format!("D infinite at alpha = {alpha}")));
        }
        v.insert(format!("D_alpha_{alpha}"), d);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    let ratio = hi / lo;
    v.insert("max_over_min".into(), ratio);
    Ok((ratio <= 10.0, v, format!("D in [{lo:.4}, {hi:.4}], max/min {ratio:.3} (need <= 10)")))
}

fn c06_gross(o: &SuiteOptions) -> Outcome {
    let c = 1.0;
    let mut worst: f64 = 0.0;
    for p in [1.5, 2.0, 3.0] {
        let s = integrate_schedule(&SobolevBudget::log_sobolev(p, c)?, 3.0 * c)?;
        for t in quad::linspace(0.0, 3.0 * c, 61) {
            let exact = (4.0 * (p - 1.0) * t / (p * c)).exp_m1();
            let q = o.inj(6, s.q_at(t));
            let err = if exact == 0.0 { q.abs() } else { ((q - exact) / exact).abs() };
            worst = worst.max(err);
        }
    }
    Ok((worst <= 1e-6, vals(&[("max_relative_error", worst)]), format!("max relative error {worst:.2e} (tol 1e-6)")))
}

/// Independent random streams for each Monte Carlo cell.
fn cell_batch(seed: u64, cell: u64, n_traj: usize) -> TrajectoryBatch {
    TrajectoryBatch { seed: seed.wrapping_add(cell.wrapping_mul(0x9e37_79b9_7f4a_7c15)), h: 1e-3, n_traj }
}

fn c07_well(o: &SuiteOptions) -> Outcome {
    let alpha = 1.5;
    let d = Diffusion::u_alpha(alpha, 1)?;
    let p = WellMethodParams::standard(alpha, 1)?;
    let n_traj = o.trajectories(100_000);
    let mut cell = 0u64;
    let mut v = BTreeMap::new();
    let mut ok = true;
    let mut worst = f64::NEG_INFINITY;
    for x in [3.0, 5.0, 8.0] {
        for t in [0.5, 1.0] {
            let batch = cell_batch(o.seed, cell, n_traj);
            cell += 1;
            let e = feynman_kac_weight(&d, &[x], t, &batch)?;
            let env = well_envelope(&p, &[x], t);
            let mean = o.inj(7, e.mean);
            let z = (mean - env) / e.stderr.max(1e-300);
            worst = worst.max(z);
            ok &= mean <= env + 3.0 * e.stderr;
            v.insert(format!("mean_x{x}_t{t}"), mean);
            v.insert(format!("envelope_x{x}_t{t}"), env);
        }
    }
    v.insert("max_excess_in_stderr".into(), worst);
    Ok((ok, v, format!("N = {n_traj}, worst (mean - envelope)/stderr = {worst:.2} (need <= 3)")))
}

fn c08_threshold(o: &SuiteOptions) -> Outcome {
    let mut v = BTreeMap::new();
    let mut worst: f64 = 0.0;
    for alpha in [1.25, 1.5, 1.75] {
        let t = integrability_threshold(alpha, Psi::critical(alpha), 0.01, 10.0)?
            .ok_or_else(|| Error::InvalidInput(format!("no threshold bracketed at alpha = {alpha}")))?;
        let t = o.inj(8, t);
        let rel = (t * alpha * alpha - 1.0).abs();
        worst = worst.max(rel);
        v.insert(format!("t_star_alpha_{alpha}"), t);
    }
    v.insert("max_relative_error".into(), worst);
    Ok((worst <= 0.05, v, format!("max |t* alpha^2 - 1| = {worst:.4} (tol 0.05)")))
}

fn c09_ou(o: &SuiteOptions) -> Outcome {
    let d = Diffusion::quadratic(1)?;
    let n_traj = o.trajectories(20_000);
    let mut cell = 0u64;
    let mut v = BTreeMap::new();
    let mut worst: f64 = 0.0;
    for x in [-1.0f64, 0.5, 2.0] {
        for t in [0.25f64, 0.5, 1.0] {
            let batch = cell_batch(o.seed, cell, n_traj);
            cell += 1;
            let exact = x * (-2.0 * t).exp();
            let e = simulate_pt(&d, &|y: &[f64]| y[0], &[x], t, &batch)?;
            for (name, est) in [("girsanov", e.girsanov), ("direct", e.direct)] {
                let z = (o.inj(9, est.mean) - exact).abs() / est.stderr.max(1e-300);
                worst = worst.max(z);
                v.insert(format!("{name}_x{x}_t{t}"), o.inj(9, est.mean));
            }
            let one = simulate_pt(&d, &|_: &[f64]| 1.0, &[x], t, &batch)?;
            for est in [one.girsanov, one.direct] {
                let dev = (o.inj(9, est.mean) - 1.0).abs();
                let z = if est.stderr > 0.0 { dev / est.stderr } else if dev <= 1e-12 { 0.0 } else { f64::INFINITY };
                worst = worst.max(z);
            }
        }
    }
    v.insert("max_deviation_in_stderr".into(), worst);
    Ok((worst <= 3.0, v, format!("N = {n_traj}, worst |estimate - exact|/stderr = {worst:.2} (need <= 3)")))
}

fn c10_isoperimetry(o: &SuiteOptions) -> Outcome {
    let ts = quad::linspace(0.005, 0.995, 100);
    let mut v = BTreeMap::new();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for alpha in [1.25, 1.5, 1.75] {
        let r = dimension_free_for_nu_alpha(alpha)?;
        let k = o.inj(10, r.k);
        let prof = bobkov_profile(&nu_alpha(alpha)?)?;
        ok &= k > 0.0;
        for &t in &ts {
            let ratio = k * l_alpha(alpha, t) / prof.eval(t);
            worst = worst.max(ratio);
        }
        v.insert(format!("K_alpha_{alpha}"), k);
    }
    ok &= worst <= 1.0;
    v.insert("max_bound_over_profile".into(), worst);
    Ok((ok, v, format!("K > 0 for all alpha, max K L/I = {worst:.3e} (need <= 1)")))
}

fn c11_cheeger(o: &SuiteOptions) -> Outcome {
    let c = o.inj(11, cheeger_lower(1.0, 0.5));
    let exact_ok = (c - CHEEGER_TARGET).abs() <= 1e-6;
    let mut dominated = true;
    for t in quad::linspace(0.0, 1.0, 201) {
        dominated &= o.inj(11, cheeger_lower(4.0, t)) <= t.min(1.0 - t) + 1e-15;
    }
    Ok((
        exact_ok && dominated,
        vals(&[("cheeger_lower_1_half", c), ("target", CHEEGER_TARGET)]),
        format!("value {c:.10} vs {CHEEGER_TARGET} +- 1e-6 (diff {:.2e}); exponential domination {dominated}", c - CHEEGER_TARGET),
    ))
}

fn c12_finite(o: &SuiteOptions) -> Outcome {
    let mut h = finite_oracle::hardy_fuzz(100, 10, o.seed)?;
    h.worst_ratio = o.inj(12, h.worst_ratio);
    let hardy_bad = h.violations + usize::from(h.worst_ratio > 11.1);
    let ak = finite_oracle::ak_fuzz(&FGrowth::LogBeta { beta: 0.5 }, 1000, o.seed)?;
    let fs = finite_oracle::fsobcap_fuzz(&FGrowth::LogBeta { beta: 1.0 }, 100, 10, 200, o.seed)?;
    let ok = hardy_bad == 0 && ak.violations == 0 && fs.violations == 0;
    Ok((
        ok,
        vals(&[
            ("hardy_violations", hardy_bad as f64),
            ("hardy_worst_c_over_b", h.worst_ratio),
            ("ak_violations", ak.violations as f64),
            ("ak_worst_ratio", ak.worst_ratio),
            ("fsobcap_violations", fs.violations as f64),
            ("fsobcap_worst_ratio", fs.worst_ratio),
        ]),
        format!(
            "hardy {} violations (worst C/B {:.3}), lem-ak {} / {}, fsobcap {} / {}",
            hardy_bad, h.worst_ratio, ak.violations, ak.instances, fs.violations, fs.instances
        ),
    ))
}

fn c13_tensor(o: &SuiteOptions) -> Outcome {
    let mut worst_gap: f64 = 0.0;
    for i in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        rng.set_stream(1000 + i);
        let n1 = rng.random_range(2..6);
        let n2 = rng.random_range(2..6);
        let a = FiniteSpace::random_connected(n1, 0.4, &mut rng)?;
        let b = FiniteSpace::random_connected(n2, 0.4, &mut rng)?;
        let g1 = finite_oracle::poincare_exact(&a)?.gap;
        let g2 = finite_oracle::poincare_exact(&b)?.gap;
        let gp = o.inj(13, finite_oracle::poincare_exact(&FiniteSpace::product(&a, &b)?)?.gap);
        worst_gap = worst_gap.max((gp - g1.min(g2)).abs() / g1.min(g2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let s1 = FiniteSpace::two_point(rng.random_range(0.1..0.9), rng.random_range(0.2..2.0))?;
    let s2 = FiniteSpace::two_point(rng.random_range(0.1..0.9), rng.random_range(0.2..2.0))?;
    let r = finite_oracle::verify_tensorization(&s1, &s2, Phi::Entropy, 10_000, o.seed)?;
    let ok = worst_gap <= 1e-10 && r.violations == 0;
    Ok((
        ok,
        vals(&[("max_gap_relative_error", worst_gap), ("entropy_violations", r.violations as f64), ("entropy_worst_ratio", r.worst_ratio)]),
        format!("gap error {worst_gap:.2e} (tol 1e-10), entropy {} violations over {} functions (worst {:.4})", r.violations, r.functions, r.worst_ratio),
    ))
}

fn c14_c1c2(o: &SuiteOptions) -> Outcome {
    let (mut margin, mut factor) = (f64::INFINITY, 0.0f64);
    for beta in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let r = check_c1c2_beta(beta)?;
        margin = margin.min(r.c1_worst_margin);
        factor = factor.max(o.inj(14, r.c2_worst_ratio));
    }
    let ok = margin >= -1e-12 && factor <= 8.0;
    Ok((ok, vals(&[("min_margin", margin), ("max_factor", factor)]), format!("margin {margin:.3e} (>= -1e-12), factor {factor:.4} (<= 8)")))
}

fn c15_determinism(o: &SuiteOptions) -> Outcome {
    let ids: Vec<u32> = (1..=14).collect();
    let a = verify_criteria(o, &ids).to_json();
    let b = verify_criteria(o, &ids).to_json();
    let same = a == b;
    Ok((same, vals(&[("bytes", a.len() as f64)]), format!("two runs of criteria 1-14 byte-identical: {same}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_parses() {
        let f: Fault = "11:1.5".parse().unwrap();
        assert_eq!(f, Fault { criterion: 11, factor: 1.5 });
        assert!("x".parse::<Fault>().is_err());
        assert!("fast".parse::<SuiteLevel>().is_err());
    }

    #[test]
    fn fault_breaks_only_its_criterion() {
        let mut o = SuiteOptions::new(SuiteLevel::Quick, 1);
        assert!(run_criterion(14, &o).passed);
        assert!(run_criterion(6, &o).passed);
        o.fault = Some(Fault { criterion: 6, factor: 1.01 });
        assert!(!run_criterion(6, &o).passed);
        assert!(run_criterion(14, &o).passed);
    }

    #[test]
    fn unknown_criterion_fails() {
        let r = run_criterion(99, &SuiteOptions::new(SuiteLevel::Quick, 0));
        assert!(!r.passed && r.detail.starts_with("error"));
    }
}
