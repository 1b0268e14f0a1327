//! Monte Carlo for the diffusion with generator `(1/2) Laplacian - grad U . grad`,
//! its Feynman-Kac weight, the well-method envelope and the integrability test
//! for Orlicz hyperboundedness.

use crate::error::{Error, Result};
use crate::fgrowth::beta_of;
use crate::line_measure::{LineMeasure, Potential};
use crate::orlicz::{gauge_norm_with, Level, OrliczSample, YoungPair};
use crate::quad;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

type Coord = Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync>;

/// `U(x) = sum_i u(x_i)` on `R^n`; `u` returns `(u, u', u'')`.
#[derive(Clone)]
pub struct Diffusion {
    pub n: usize,
    u: Coord,
    tag: String,
    clip_radius: f64,
}

impl fmt::Debug for Diffusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diffusion({}, n={}, R={})", self.tag, self.n, self.clip_radius)
    }
}

impl Diffusion {
    pub fn new<F>(tag: &str, n: usize, u: F) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static,
    {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        let u: Coord = Arc::new(u);
        // nu(|x_i| > R) < 1e-12 once 2(u(R) - u(0)) exceeds 40.
        let u0 = u(0.0).0;
        let mut r = 1.0;
        while 2.0 * (u(r).0 - u0) < 40.0 {
            r *= 2.0;
            if r > 1e12 {
                return Err(Error::NonIntegrable(format!("potential {tag} grows too slowly")));
            }
        }
        Ok(Diffusion { n, u, tag: tag.to_string(), clip_radius: r })
    }

    /// `u = u_alpha` in each coordinate.
    pub fn u_alpha(alpha: f64, n: usize) -> Result<Self> {
        let p = Potential::u_alpha(alpha)?;
        Self::from_potential(&p, n)
    }

    /// `u(x) = x^2`, so `dX = -2X dt + dW` is Ornstein-Uhlenbeck.
    pub fn quadratic(n: usize) -> Result<Self> {
        Self::new("x^2", n, |x| (x * x, 2.0 * x, 2.0))
    }

    pub fn from_potential(p: &Potential, n: usize) -> Result<Self> {
        let p = p.clone();
        let tag = p.tag().to_string();
        Self::new(&tag, n, move |x| (p.evaluate(x), p.derivative(x), p.second_derivative(x)))
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn clip_radius(&self) -> f64 {
        self.clip_radius
    }

    pub fn potential(&self, x: &[f64]) -> f64 {
        x.iter().map(|&xi| (self.u)(xi).0).sum()
    }

    /// `(Laplacian U - |grad U|^2) / 2`.
    fn weight_rate(&self, x: &[f64]) -> f64 {
        x.iter()
            .map(|&xi| {
                let (_, d1, d2) = (self.u)(xi);
                0.5 * (d2 - d1 * d1)
            })
            .sum()
    }
}

/// Seed, step and trajectory count of a Monte Carlo run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrajectoryBatch {
    pub seed: u64,
    pub h: f64,
    pub n_traj: usize,
}

impl TrajectoryBatch {
    pub fn validate(&self) -> Result<()> {
        if self.n_traj < 1 || !(self.h > 0.0) {
            return Err(Error::InvalidInput(format!("need n_traj >= 1 and h > 0, got {self:?}")));
        }
        Ok(())
    }

    fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(index as u64);
        r
    }

    fn steps(&self, t: f64) -> (usize, f64) {
        let k = (t / self.h).ceil().max(1.0) as usize;
        (k, t / k as f64)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 64 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

impl Estimate {
    fn from_samples(v: &[f64]) -> Self {
        let n = v.len() as f64;
        let mean = pairwise_sum(v) / n;
        if v.len() < 2 {
            return Estimate { mean, stderr: 0.0 };
        }
        let dev: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
        Estimate { mean, stderr: (pairwise_sum(&dev) / (n - 1.0) / n).sqrt() }
    }

    pub fn exact(v: f64) -> Self {
        Estimate { mean: v, stderr: 0.0 }
    }
}

/// Both estimators of `P_t f(x)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PtEstimate {
    /// Brownian paths weighted by `e^{U(x) - U(X_t)} M_t`.
    pub girsanov: Estimate,
    /// Euler-Maruyama paths of the Langevin equation.
    pub direct: Estimate,
    pub joint_stderr: f64,
    pub clip_events: u64,
}

pub type TestFn<'a> = dyn Fn(&[f64]) -> f64 + Sync + 'a;

/// Estimates `P_t f(x)` by the weighted Brownian formula and by direct simulation.
///
/// Fails with `StepTooCoarse` when the two disagree by more than five joint standard errors.
pub fn simulate_pt(d: &Diffusion, f: &TestFn<'_>, x: &[f64], t: f64, batch: &TrajectoryBatch) -> Result<PtEstimate> {
    batch.validate()?;
    if x.len() != d.n {
        return Err(Error::InvalidInput(format!("start point has dimension {}, expected {}", x.len(), d.n)));
    }
    if t == 0.0 {
        let v = f(x);
        return Ok(PtEstimate { girsanov: Estimate::exact(v), direct: Estimate::exact(v), joint_stderr: 0.0, clip_events: 0 });
    }
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("t must be nonnegative, got {t}")));
    }
    let (k, h) = batch.steps(t);
    let sq = h.sqrt();
    let radius = d.clip_radius.max(x.iter().fold(0.0f64, |a, v| a.max(v.abs())) + 10.0);
    let u_x = d.potential(x);
    let rows: Vec<(f64, f64, u64)> = (0..batch.n_traj)
        .into_par_iter()
        .map(|i| {
            let mut rng = batch.rng(i);
            let mut b = x.to_vec();
            let mut y = x.to_vec();
            let mut clips = 0u64;
            let mut rate = d.weight_rate(&b);
            let mut acc = 0.0;
            for _ in 0..k {
                for j in 0..d.n {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let z2: f64 = StandardNormal.sample(&mut rng);
                    b[j] += sq * z;
                    let yc = if y[j].abs() > radius {
                        clips += 1;
                        radius * y[j].signum()
                    } else {
                        y[j]
                    };
                    y[j] += -(d.u)(yc).1 * h + sq * z2;
                }
                let next = d.weight_rate(&b);
                acc += 0.5 * h * (rate + next);
                rate = next;
            }
            let g = f(&b) * (u_x - d.potential(&b) + acc).exp();
            (g, f(&y), clips)
        })
        .collect();
    let gs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ds: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let clip_events = rows.iter().map(|r| r.2).sum();
    let girsanov = Estimate::from_samples(&gs);
    let direct = Estimate::from_samples(&ds);
    let joint_stderr = (girsanov.stderr.powi(2) + direct.stderr.powi(2)).sqrt();
    let gap = (girsanov.mean - direct.mean).abs();
    if gap > 5.0 * joint_stderr && gap > 1e-12 * (1.0 + direct.mean.abs()) {
        return Err(Error::StepTooCoarse(format!(
            "estimators differ by {gap:.3e} > 5 x {joint_stderr:.3e} at h={h}"
        )));
    }
    Ok(PtEstimate { girsanov, direct, joint_stderr, clip_events })
}

/// Direct Euler-Maruyama estimate of `P_t f(x)` alone.
pub fn simulate_direct(d: &Diffusion, f: &TestFn<'_>, x: &[f64], t: f64, batch: &TrajectoryBatch) -> Result<Estimate> {
    batch.validate()?;
    if t == 0.0 {
        return Ok(Estimate::exact(f(x)));
    }
    let (k, h) = batch.steps(t);
    let sq = h.sqrt();
    let radius = d.clip_radius.max(x.iter().fold(0.0f64, |a, v| a.max(v.abs())) + 10.0);
    let vals: Vec<f64> = (0..batch.n_traj)
        .into_par_iter()
        .map(|i| {
            let mut rng = batch.rng(i);
            let mut y = x.to_vec();
            for _ in 0..k {
                for yj in y.iter_mut() {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let yc = yj.clamp(-radius, radius);
                    *yj += -(d.u)(yc).1 * h + sq * z;
                }
            }
            f(&y)
        })
        .collect();
    Ok(Estimate::from_samples(&vals))
}

/// Estimate of `E^{P_x}[M_t]` over Brownian paths, trapezoid rule in time.
pub fn feynman_kac_weight(d: &Diffusion, x: &[f64], t: f64, batch: &TrajectoryBatch) -> Result<Estimate> {
    batch.validate()?;
    if t == 0.0 {
        return Ok(Estimate::exact(1.0));
    }
    let (k, h) = batch.steps(t);
    let sq = h.sqrt();
    let vals: Vec<f64> = (0..batch.n_traj)
        .into_par_iter()
        .map(|i| {
            let mut rng = batch.rng(i);
            let mut b = x.to_vec();
            let mut rate = d.weight_rate(&b);
            let mut acc = 0.0;
            for _ in 0..k {
                for bj in b.iter_mut() {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *bj += sq * z;
                }
                let next = d.weight_rate(&b);
                acc += 0.5 * h * (rate + next);
                rate = next;
            }
            acc.exp()
        })
        .collect();
    Ok(Estimate::from_samples(&vals))
}

/// Constants of the well-method bound for `u_alpha` on `R^n`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WellMethodParams {
    pub alpha: f64,
    pub n: usize,
    pub beta_split: f64,
    pub d_alpha: f64,
}

impl WellMethodParams {
    pub fn new(alpha: f64, n: usize, beta_split: f64, d_alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::DomainError(format!("alpha must lie in (1,2), got {alpha}")));
        }
        if n == 0 || !(beta_split > 0.0 && beta_split < 1.0) {
            return Err(Error::InvalidInput("need n >= 1 and beta in (0,1)".into()));
        }
        if !(d_alpha > 0.0 && d_alpha < alpha * alpha) {
            return Err(Error::InvalidInput(format!("d_alpha must lie in (0, alpha^2), got {d_alpha}")));
        }
        Ok(WellMethodParams { alpha, n, beta_split, d_alpha })
    }

    /// `beta = 1/2`, `d_alpha = alpha^2 (1 - 1e-3)`.
    pub fn standard(alpha: f64, n: usize) -> Result<Self> {
        Self::new(alpha, n, 0.5, alpha * alpha * (1.0 - 1e-3))
    }

    pub fn c_alpha(&self) -> f64 {
        self.n as f64 * (1.0 + 0.5 * self.alpha * (self.alpha - 1.0))
    }

    pub fn g_coefficient(&self) -> f64 {
        0.5 * self.alpha * self.alpha
    }

    pub fn g_exponent(&self) -> f64 {
        2.0 * (1.0 - 1.0 / self.alpha)
    }
}

/// Upper bound for `E^{P_x}[M_t]`:
/// `e^{c t} (exp(-t G((1-beta) U(x))) + exp(-beta U(x)))` when `U(x) > 1`, else `e^{c t}`.
///
/// In one dimension `U(x) > 1` is exactly `|x| > 1` and `G((1-beta)U)` is
/// `(1-beta)^{2(1-1/alpha)} (alpha^2/2) |x|^{2(alpha-1)}`.
pub fn well_envelope(p: &WellMethodParams, x: &[f64], t: f64) -> f64 {
    let u = Potential::u_alpha_closed(p.alpha);
    let ux: f64 = x.iter().map(|&xi| u.evaluate(xi)).sum();
    let rough = (p.c_alpha() * t).exp();
    if ux <= 1.0 {
        return rough;
    }
    let b = p.beta_split;
    let g = p.g_coefficient() * ((1.0 - b) * ux).powf(p.g_exponent());
    rough * ((-t * g).exp() + (-b * ux).exp())
}

/// `psi` of `tau(y) = y^2 psi(y)`, given through `G(w) = log psi(exp(exp(w)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Psi {
    One,
    /// `psi(y) = y^s`.
    Power { s: f64 },
    /// `psi(y) = exp(log(y)^beta)`.
    LogPower { beta: f64 },
}

impl Psi {
    /// The growth making the semigroup of `nu_alpha` hyperbounded exactly for `t > 1/alpha^2`.
    pub fn critical(alpha: f64) -> Self {
        Psi::LogPower { beta: beta_of(alpha) }
    }

    fn log_psi_exp_exp(&self, w: f64) -> f64 {
        match *self {
            Psi::One => 0.0,
            Psi::Power { s } => s * w.exp(),
            Psi::LogPower { beta } => (beta * w).exp(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegrabilityVerdict {
    pub integrable: bool,
    /// Smallest scanned `d_alpha < alpha^2` certifying convergence.
    pub d_alpha: Option<f64>,
    /// `log(x^2 * integrand)` at the last sample for the largest scanned `d_alpha`.
    pub tail_log_at_end: f64,
}

/// Scans `d_alpha = alpha^2 (1 - 2^{-k})` for a convergent
/// `int psi(e^{|x|^alpha}) e^{-d_alpha t |x|^{2(alpha-1)}} dx`.
///
/// The tail test asks `log(x^2 * integrand)` to decrease over the last samples
/// and to end below `-50`, which bounds the integrand by `e^{-50}/x^2`.
pub fn integrability_check(alpha: f64, psi: Psi, t: f64) -> Result<IntegrabilityVerdict> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::DomainError(format!("alpha must lie in (1,2), got {alpha}")));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("t must be positive, got {t}")));
    }
    let e = 2.0 * alpha - 2.0;
    let s_end = (1e6f64.ln() / e).max(1e3f64.ln());
    let ss = quad::linspace(10f64.ln(), s_end, 400);
    let mut last = f64::NAN;
    for k in 1..=40 {
        let d = alpha * alpha * (1.0 - 0.5f64.powi(k));
        let lg: Vec<f64> = ss
            .iter()
            .map(|&s| {
                let v = psi.log_psi_exp_exp(alpha * s) - d * t * (e * s).exp() + 2.0 * s;
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            })
            .collect();
        let n = lg.len();
        last = lg[n - 1];
        let decreasing = lg[n - 20..].windows(2).all(|w| w[1] < w[0]);
        if decreasing && last < -50.0 {
            return Ok(IntegrabilityVerdict { integrable: true, d_alpha: Some(d), tail_log_at_end: last });
        }
    }
    Ok(IntegrabilityVerdict { integrable: false, d_alpha: None, tail_log_at_end: last })
}

/// Bisection on `t` for the integrability threshold; `None` when `[lo, hi]` does not bracket it.
pub fn integrability_threshold(alpha: f64, psi: Psi, lo: f64, hi: f64) -> Result<Option<f64>> {
    if integrability_check(alpha, psi, lo)?.integrable || !integrability_check(alpha, psi, hi)?.integrable {
        return Ok(None);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if integrability_check(alpha, psi, m)?.integrable {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// A named test function on the line.
#[derive(Clone)]
pub struct TestFunction {
    pub name: String,
    pub f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl TestFunction {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(name: &str, f: F) -> Self {
        TestFunction { name: name.to_string(), f: Arc::new(f) }
    }
}

/// Constants, `x`, and `e^{c u_alpha}` for `c in {1/2, 9/10}`.
pub fn default_test_set(alpha: f64) -> Vec<TestFunction> {
    let u = Potential::u_alpha_closed(alpha);
    let (u1, u2) = (u.clone(), u);
    vec![
        TestFunction::new("1", |_| 1.0),
        TestFunction::new("x", |x| x),
        TestFunction::new("exp(u/2)", move |x| (0.5 * u1.evaluate(x)).exp()),
        TestFunction::new("exp(0.9u)", move |x| (0.9 * u2.evaluate(x)).exp()),
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioRow {
    pub name: String,
    pub ratio: f64,
    pub max_stderr: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperboundednessTable {
    pub t: f64,
    pub tau: String,
    pub rows: Vec<RatioRow>,
    pub max_ratio: f64,
    pub label: String,
}

/// `max_f N_tau(P_t f) / ||f||_2` over a test set, with `P_t f` estimated by
/// direct simulation at the nodes of an equal-mass rule for `nu_alpha`.
pub fn empirical_hyperboundedness(
    alpha: f64,
    pair: &YoungPair,
    t: f64,
    batch: &TrajectoryBatch,
    nodes: usize,
    tests: &[TestFunction],
) -> Result<HyperboundednessTable> {
    let nu = LineMeasure::new(Potential::u_alpha(alpha)?, 2.0)?;
    let d = Diffusion::u_alpha(alpha, 1)?;
    let rule = nu.quantile_rule(nodes);
    let weights = Arc::new(rule.1.clone());
    let mut rows = Vec::new();
    for tf in tests {
        let f0 = OrliczSample::from_fn(&rule, |x| (tf.f)(x));
        let l2 = f0.l2_norm();
        let g = |y: &[f64]| (tf.f)(y[0]);
        let mut vals = Vec::with_capacity(nodes);
        let mut max_se: f64 = 0.0;
        for (i, &x) in rule.0.iter().enumerate() {
            let b = TrajectoryBatch { seed: batch.seed.wrapping_add(i as u64), ..*batch };
            let est = simulate_direct(&d, &g, &[x], t, &b)?;
            max_se = max_se.max(est.stderr);
            vals.push(est.mean);
        }
        let ptf = OrliczSample::new(vals, weights.clone())?;
        let n = gauge_norm_with(&ptf, &pair.tau, Level::TauOne)?;
        rows.push(RatioRow { name: tf.name.clone(), ratio: n / l2, max_stderr: max_se });
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(HyperboundednessTable {
        t,
        tau: pair.tau.tag().to_string(),
        rows,
        max_ratio,
        label: "empirical lower bound of operator norm".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::YoungFunction;

    fn batch(n: usize) -> TrajectoryBatch {
        TrajectoryBatch { seed: 7, h: 1e-3, n_traj: n }
    }

    #[test]
    fn time_zero_is_identity() {
        let d = Diffusion::quadratic(1).unwrap();
        let e = simulate_pt(&d, &|y: &[f64]| y[0] * 2.0, &[0.75], 0.0, &batch(10)).unwrap();
        assert_eq!(e.girsanov.mean, 1.5);
        assert_eq!(e.direct.mean, 1.5);
    }

    #[test]
    fn ou_mean() {
        let d = Diffusion::quadratic(1).unwrap();
        let (x, t) = (0.8, 0.5);
        let e = simulate_pt(&d, &|y: &[f64]| y[0], &[x], t, &batch(4000)).unwrap();
        let exact = x * (-2.0 * t).exp();
        assert!((e.direct.mean - exact).abs() < 3.0 * e.direct.stderr + 2e-3);
        assert!((e.girsanov.mean - exact).abs() < 3.0 * e.girsanov.stderr + 2e-3);
        let one = simulate_pt(&d, &|_: &[f64]| 1.0, &[x], t, &batch(4000)).unwrap();
        assert_eq!(one.direct.mean, 1.0);
        assert!((one.girsanov.mean - 1.0).abs() < 3.0 * one.girsanov.stderr + 2e-3);
    }

    #[test]
    fn deterministic_given_seed() {
        let d = Diffusion::u_alpha(1.5, 2).unwrap();
        let a = feynman_kac_weight(&d, &[1.5, -0.5], 0.3, &batch(200)).unwrap();
        let b = feynman_kac_weight(&d, &[1.5, -0.5], 0.3, &batch(200)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn envelope_values() {
        let p = WellMethodParams::standard(1.5, 1).unwrap();
        assert_eq!(well_envelope(&p, &[0.5], 1.0), 1.375f64.exp());
        let x: f64 = 5.0;
        let g = 0.5f64.powf(2.0 / 3.0) * 1.125 * x.powf(1.0);
        let want = 1.375f64.exp() * ((-g).exp() + (-0.5 * x.powf(1.5)).exp());
        assert!((well_envelope(&p, &[x], 1.0) - want).abs() < 1e-14);
    }

    #[test]
    fn integrability_examples() {
        assert!(integrability_check(1.5, Psi::One, 0.01).unwrap().integrable);
        for t in [0.1, 1.0, 100.0] {
            assert!(!integrability_check(1.5, Psi::Power { s: 1.0 }, t).unwrap().integrable);
        }
        let ts = integrability_threshold(1.5, Psi::critical(1.5), 0.01, 10.0).unwrap().unwrap();
        assert!((ts - 4.0 / 9.0).abs() < 0.05 * 4.0 / 9.0, "{ts}");
    }

    #[test]
    fn hyperboundedness_identity_cases() {
        let pair = YoungPair::new(YoungFunction::power(2.0, 1.0).unwrap()).unwrap();
        let tests = default_test_set(1.5);
        let tab = empirical_hyperboundedness(1.5, &pair, 0.0, &batch(10), 16, &tests).unwrap();
        for r in &tab.rows {
            assert!((r.ratio - 1.0).abs() < 1e-9, "{r:?}");
        }
        let one = &tests[..1];
        let tab = empirical_hyperboundedness(1.5, &pair, 0.3, &batch(50), 8, one).unwrap();
        assert!((tab.rows[0].ratio - 1.0).abs() < 1e-9);
    }
}
