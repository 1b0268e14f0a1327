//! Young functions, numerically conjugated pairs, gauge norms and the tau-entropy.
//!
//! The gauge norm uses the level `tau(1)`:
//! `N_tau(f) = inf { k > 0 : int tau(|f|/k) dmu <= tau(1) }`, so `N_tau(1) = 1`
//! for every Young function and `tau(x) = x^2` gives the `L^2` norm.

use crate::error::{Error, Result};
use crate::fgrowth::{beta_of, FGrowth};
use crate::interp::Pchip;
use crate::quad::{self, bisect};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Relative slack allowed in the duality sandwich and Young checks.
pub const SANDWICH_TOL: f64 = 1e-8;

#[derive(Clone)]
enum Repr {
    Closure { f: RealFn, d1: RealFn },
    Scaled { c: f64, inner: Box<YoungFunction> },
    Table(Arc<ConjugateTable>),
}

struct ConjugateTable {
    log_val: Pchip,
    log_slope: Pchip,
}

/// An even convex function with `tau(0) = 0`, evaluated on `[0, inf)`.
#[derive(Clone)]
pub struct YoungFunction {
    repr: Repr,
    tag: String,
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YoungFunction({})", self.tag)
    }
}

impl YoungFunction {
    /// A Young function with an explicit derivative.
    pub fn from_fn<F, D>(tag: &str, f: F, d1: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        YoungFunction { repr: Repr::Closure { f: Arc::new(f), d1: Arc::new(d1) }, tag: tag.to_string() }
    }

    /// `coeff * x^p` with `p > 1`.
    pub fn power(p: f64, coeff: f64) -> Result<Self> {
        if !(p > 1.0 && coeff > 0.0) {
            return Err(Error::DomainError(format!("power Young function needs p>1, coeff>0; got p={p}, coeff={coeff}")));
        }
        Ok(Self::from_fn(
            &format!("{coeff}*x^{p}"),
            move |x: f64| coeff * x.abs().powf(p),
            move |x: f64| coeff * p * x.abs().powf(p - 1.0),
        ))
    }

    /// `tau_q(x) = x^p exp(q F(x^p))`.
    pub fn tau_q(p: f64, q: f64, f: FGrowth) -> Result<Self> {
        if !(p > 1.0 && q >= 0.0) {
            return Err(Error::DomainError(format!("tau_q needs p>1, q>=0; got p={p}, q={q}")));
        }
        let tag = format!("tau_q(p={p},q={q},F={})", f.tag());
        let f1 = f.clone();
        Ok(Self::from_fn(
            &tag,
            move |x: f64| {
                let x = x.abs();
                if x == 0.0 {
                    return 0.0;
                }
                let u = x.powf(p);
                u * (q * f1.eval(u)).exp()
            },
            move |x: f64| {
                let x = x.abs();
                if x == 0.0 {
                    return 0.0;
                }
                let u = x.powf(p);
                p * x.powf(p - 1.0) * (q * f.eval(u)).exp() * (1.0 + q * u * f.d1(u))
            },
        ))
    }

    /// `y^2 psi(y)` with `psi(y) = exp(log(e + y)^beta - 1)`, `beta = 2(1 - 1/alpha)`.
    ///
    /// For large `y`, `log psi(y) ~ (log y)^beta`, the growth that makes the
    /// semigroup bounded from `L^2` into the Orlicz space at every positive time.
    pub fn example_pair_generator(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::DomainError(format!("alpha must lie in (1,2), got {alpha}")));
        }
        let b = beta_of(alpha);
        let e = std::f64::consts::E;
        Ok(Self::from_fn(
            &format!("y^2*psi_alpha(alpha={alpha})"),
            move |y: f64| {
                let y = y.abs();
                y * y * ((e + y).ln().powf(b) - 1.0).exp()
            },
            move |y: f64| {
                let y = y.abs();
                let l = (e + y).ln();
                let g = (l.powf(b) - 1.0).exp();
                g * (2.0 * y + y * y * b * l.powf(b - 1.0) / (e + y))
            },
        ))
    }

    /// `exp(x^2) - 1`, which fails the doubling condition.
    pub fn exp_square() -> Self {
        Self::from_fn("exp(x^2)-1", |x: f64| (x * x).exp_m1(), |x: f64| 2.0 * x * (x * x).exp())
    }

    pub fn scaled(&self, c: f64) -> Self {
        YoungFunction { repr: Repr::Scaled { c, inner: Box::new(self.clone()) }, tag: format!("{c}*{}", self.tag) }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        match &self.repr {
            Repr::Closure { f, .. } => f(x),
            Repr::Scaled { c, inner } => c * inner.eval(x),
            Repr::Table(t) => {
                if x == 0.0 {
                    0.0
                } else {
                    t.log_val.eval(x.ln()).exp()
                }
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let x = x.abs();
        match &self.repr {
            Repr::Closure { d1, .. } => d1(x),
            Repr::Scaled { c, inner } => c * inner.derivative(x),
            Repr::Table(t) => {
                if x == 0.0 {
                    0.0
                } else {
                    t.log_slope.eval(x.ln()).exp()
                }
            }
        }
    }

    /// Inverse on `[0, inf)`.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if let Repr::Table(t) = &self.repr {
            return t.log_val.inverse_increasing(y.ln()).exp();
        }
        let mut hi = 1.0;
        while self.eval(hi) < y {
            hi *= 2.0;
            if hi > 1e300 {
                return f64::INFINITY;
            }
        }
        let mut lo = hi / 2.0;
        while self.eval(lo) > y && lo > 1e-300 {
            lo /= 2.0;
        }
        let r = bisect(|lx: f64| self.eval(lx.exp()).ln() - y.ln(), lo.ln(), hi.ln(), 1e-15, 200);
        r.exp()
    }

    /// Midpoint-convexity and slope monotonicity on a log grid.
    pub fn check_convex(&self) -> Result<()> {
        if self.eval(0.0).abs() > 1e-300 {
            return Err(Error::ConvexityViolation(format!("{}: tau(0) != 0", self.tag)));
        }
        let xs = quad::logspace(1e-6, 1e6, 1200);
        let mut prev_d = 0.0;
        for w in xs.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb, fm) = (self.eval(a), self.eval(b), self.eval(0.5 * (a + b)));
            if !(fa.is_finite() && fb.is_finite()) {
                break;
            }
            if fm > 0.5 * (fa + fb) * (1.0 + 1e-12) {
                return Err(Error::ConvexityViolation(format!("{}: midpoint test fails on [{a}, {b}]", self.tag)));
            }
            if fb < fa {
                return Err(Error::ConvexityViolation(format!("{}: not increasing near {a}", self.tag)));
            }
            let d = self.derivative(a);
            if d < prev_d * (1.0 - 1e-9) {
                return Err(Error::ConvexityViolation(format!("{}: slope decreases near {a}", self.tag)));
            }
            prev_d = d;
        }
        Ok(())
    }
}

/// Log grid for conjugation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    pub min_decade: i32,
    pub max_decade: i32,
    pub per_decade: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { min_decade: -8, max_decade: 8, per_decade: 100 }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let n = (self.max_decade - self.min_decade) as i64 * self.per_decade as i64;
        (0..=n)
            .map(|k| 10f64.powf(self.min_decade as f64 + k as f64 / self.per_decade as f64))
            .collect()
    }
}

/// `tau*(y) = sup_x (xy - tau(x))`, tabulated on a log grid.
///
/// For each grid `y` the maximizer solves `tau'(x) = y`; maximizers are
/// non-decreasing in `y`, so each search starts from the previous one.
pub fn conjugate(tau: &YoungFunction, grid: GridSpec) -> Result<YoungFunction> {
    tau.check_convex()?;
    let ys = grid.points();
    let mut lv = Vec::with_capacity(ys.len());
    let mut ls = Vec::with_capacity(ys.len());
    let mut x_prev: f64 = 0.0;
    for &y in &ys {
        let mut lo = x_prev;
        let mut hi = if x_prev > 0.0 { 2.0 * x_prev } else { 1e-300_f64.max(y * 1e-12) };
        let mut guard = 0;
        while tau.derivative(hi) < y {
            lo = hi;
            hi *= 2.0;
            guard += 1;
            if guard > 3000 || !hi.is_finite() {
                return Err(Error::ConvexityViolation(format!("{}: slope never reaches {y}", tau.tag)));
            }
        }
        let x = bisect(|x| tau.derivative(x) - y, lo, hi, 0.0, 300);
        if x < x_prev * (1.0 - 1e-12) {
            return Err(Error::ConvexityViolation(format!("{}: maximizer decreases at y={y}", tau.tag)));
        }
        x_prev = x;
        let v = x * y - tau.eval(x);
        if !(v > 0.0) {
            return Err(Error::ConvexityViolation(format!(
                "{}: conjugate is not positive at y={y}; tau'(0) must vanish",
                tau.tag
            )));
        }
        lv.push(v.ln());
        ls.push(x.ln());
    }
    let lys: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let table = ConjugateTable { log_val: Pchip::new(lys.clone(), lv)?, log_slope: Pchip::new(lys, ls)? };
    if table.log_val.ys().windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ConvexityViolation(format!("{}: conjugate not increasing", tau.tag)));
    }
    Ok(YoungFunction { repr: Repr::Table(Arc::new(table)), tag: format!("conj({})", tau.tag) })
}

/// Doubling certificate `tau(2y) <= K tau(y)` for `y >= y1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Delta2Certificate {
    pub k: f64,
    pub y1: f64,
    /// Supremum of the ratio over the last scanned decade.
    pub k_tail: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Delta2Outcome {
    Holds(Delta2Certificate),
    Fails { worst_ratio: f64, at: f64 },
}

/// Scans `tau(2y)/tau(y)` on `[1e-6, 1e12]`.
///
/// The bound is declared to hold from `y1 = 0` when the ratio stays finite and
/// does not trend upward over the last decades of the scan.
pub fn delta2_check(tau: &YoungFunction) -> Delta2Outcome {
    let ys = quad::logspace(1e-6, 1e12, 721);
    let mut ratios = Vec::with_capacity(ys.len());
    for &y in &ys {
        let r = tau.eval(2.0 * y) / tau.eval(y);
        if !r.is_finite() {
            return Delta2Outcome::Fails { worst_ratio: f64::INFINITY, at: y };
        }
        ratios.push(r);
    }
    let n = ratios.len();
    let decade = n / 18;
    let tail = &ratios[n - decade..];
    let before = &ratios[n - 3 * decade..n - 2 * decade];
    let tail_max = tail.iter().cloned().fold(0.0, f64::max);
    let before_max = before.iter().cloned().fold(0.0, f64::max);
    let rising = tail.windows(2).all(|w| w[1] >= w[0]) && tail_max > before_max * 1.5;
    let (k, at) = ratios
        .iter()
        .zip(&ys)
        .fold((0.0, 0.0), |acc, (&r, &y)| if r > acc.0 { (r, y) } else { acc });
    if rising {
        return Delta2Outcome::Fails { worst_ratio: k, at };
    }
    Delta2Outcome::Holds(Delta2Certificate { k, y1: 0.0, k_tail: tail_max })
}

/// Smallest `l` in a ladder with `tau(l y) >= 2 l tau(y)` for all scanned `y >= y1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Nabla2Certificate {
    pub l: f64,
    pub y1: f64,
}

pub fn nabla2_check(tau: &YoungFunction) -> Option<Nabla2Certificate> {
    let ys = quad::logspace(1e-6, 1e8, 561);
    for l in [1.25, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0, 64.0] {
        let ok: Vec<bool> = ys
            .iter()
            .map(|&y| tau.eval(l * y) >= 2.0 * l * tau.eval(y) * (1.0 - 1e-12))
            .collect();
        if let Some(first_bad_from_end) = ok.iter().rposition(|&b| !b) {
            if first_bad_from_end + 1 < ys.len() / 2 {
                return Some(Nabla2Certificate { l, y1: ys[first_bad_from_end + 1] });
            }
        } else {
            return Some(Nabla2Certificate { l, y1: 0.0 });
        }
    }
    None
}

/// A complementary pair `(tau, tau*)`.
#[derive(Debug, Clone)]
pub struct YoungPair {
    pub tau: YoungFunction,
    pub tau_star: YoungFunction,
    pub normalized: bool,
    /// Scalar `c` with `tau = c * original`; `1` when no normalization was applied.
    pub normalization_scale: f64,
    pub original: YoungFunction,
    pub delta2: Delta2Outcome,
    pub nabla2: Option<Nabla2Certificate>,
}

/// JSON-friendly summary of a pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairCertificate {
    pub tau: String,
    pub normalized: bool,
    pub normalization_scale: f64,
    pub tau_at_one: f64,
    pub tau_star_at_one: f64,
    pub delta2: Delta2Outcome,
    pub nabla2: Option<Nabla2Certificate>,
}

impl YoungPair {
    /// Conjugates `tau` as given.
    pub fn new(tau: YoungFunction) -> Result<Self> {
        let tau_star = conjugate(&tau, GridSpec::default())?;
        Ok(YoungPair {
            delta2: delta2_check(&tau),
            nabla2: nabla2_check(&tau),
            original: tau.clone(),
            tau,
            tau_star,
            normalized: false,
            normalization_scale: 1.0,
        })
    }

    /// Rescales `tau` so that `tau(1) + tau*(1) = 1`.
    ///
    /// Young's inequality at `x = 1` gives `c tau(1) + c tau*(1/c) >= 1` with
    /// equality exactly when `c tau'(1) = 1`, so the scalar is `1/tau'(1)`.
    pub fn normalized(tau: YoungFunction) -> Result<Self> {
        let d = tau.derivative(1.0);
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::NormalizationFailure(format!("{}: tau'(1) = {d}", tau.tag)));
        }
        let c = 1.0 / d;
        let scaled = tau.scaled(c);
        let tau_star = conjugate(&scaled, GridSpec::default())?;
        let s = scaled.eval(1.0) + tau_star.eval(1.0);
        if (s - 1.0).abs() > 1e-8 {
            return Err(Error::NormalizationFailure(format!("{}: tau(1)+tau*(1) = {s}", tau.tag)));
        }
        Ok(YoungPair {
            delta2: delta2_check(&scaled),
            nabla2: nabla2_check(&scaled),
            tau: scaled,
            tau_star,
            normalized: true,
            normalization_scale: c,
            original: tau,
        })
    }

    pub fn certificate(&self) -> PairCertificate {
        PairCertificate {
            tau: self.original.tag().to_string(),
            normalized: self.normalized,
            normalization_scale: self.normalization_scale,
            tau_at_one: self.tau.eval(1.0),
            tau_star_at_one: self.tau_star.eval(1.0),
            delta2: self.delta2.clone(),
            nabla2: self.nabla2.clone(),
        }
    }

    /// Worst relative position of `tau^{-1}(y) tau*^{-1}(y)` inside `[y, 2y]`.
    ///
    /// Returns `(min of product/y, max of product/y)`; errors if either side leaves the band.
    pub fn check_sandwich(&self, ys: &[f64]) -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for &y in ys {
            let r = self.tau.inverse(y) * self.tau_star.inverse(y) / y;
            lo = lo.min(r);
            hi = hi.max(r);
            if !(1.0 - SANDWICH_TOL..=2.0 + 2.0 * SANDWICH_TOL).contains(&r) || !r.is_finite() {
                return Err(Error::SandwichViolation(format!("{}: product/y = {r} at y={y}", self.tau.tag)));
            }
        }
        Ok((lo, hi))
    }

    /// Largest relative violation of `xy <= tau(x) + tau*(y)` over the given pairs.
    pub fn young_defect(&self, pts: &[(f64, f64)]) -> f64 {
        pts.iter()
            .map(|&(x, y)| {
                let rhs = self.tau.eval(x) + self.tau_star.eval(y);
                (x * y - rhs) / rhs.max(1e-300)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Values of a function on the nodes of a discrete rule.
#[derive(Debug, Clone)]
pub struct OrliczSample {
    pub values: Vec<f64>,
    pub weights: Arc<Vec<f64>>,
}

impl OrliczSample {
    pub fn new(values: Vec<f64>, weights: Arc<Vec<f64>>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::InvalidInput("values and weights differ in length".into()));
        }
        Ok(OrliczSample { values, weights })
    }

    /// Samples `f` on the nodes of `(xs, ws)`.
    pub fn from_fn<F: Fn(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), f: F) -> Self {
        OrliczSample { values: rule.0.iter().map(|&x| f(x)).collect(), weights: Arc::new(rule.1.clone()) }
    }

    pub fn integral<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        self.values.iter().zip(self.weights.iter()).map(|(&v, &w)| w * g(v)).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.integral(|v| v * v).sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        OrliczSample { values: self.values.iter().map(|v| c * v).collect(), weights: self.weights.clone() }
    }

    /// `I_tau(f / k)`.
    pub fn modular(&self, tau: &YoungFunction, k: f64) -> f64 {
        self.integral(|v| tau.eval(v.abs() / k))
    }
}

/// Which level defines the unit ball of a gauge norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    /// `int tau(f/k) <= tau(1)`.
    TauOne,
    /// `int tau(f/k) <= 1`.
    Unit,
}

/// `inf { k : I_tau(f/k) <= level }` by bisection in `log k`.
pub fn gauge_norm_with(f: &OrliczSample, tau: &YoungFunction, level: Level) -> Result<f64> {
    let target = match level {
        Level::TauOne => tau.eval(1.0),
        Level::Unit => 1.0,
    };
    let k0 = f.l2_norm();
    if k0 == 0.0 {
        return Ok(0.0);
    }
    let g = |k: f64| f.modular(tau, k) - target;
    let (mut lo, mut hi) = (k0, k0);
    if g(k0) > 0.0 {
        let mut n = 0;
        while g(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
            n += 1;
            if n > 1100 {
                return Err(Error::Unbounded(format!("modular of {} stays above level", tau.tag)));
            }
        }
    } else {
        let mut n = 0;
        while g(lo) <= 0.0 {
            hi = lo;
            lo /= 2.0;
            n += 1;
            if n > 1100 {
                return Err(Error::Unbounded(format!("modular of {} never exceeds level", tau.tag)));
            }
        }
    }
    let (mut a, mut b) = (lo.ln(), hi.ln());
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if g(m.exp()) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// Gauge norm `N_tau(f)` at level `tau(1)`.
pub fn gauge_norm(f: &OrliczSample, pair: &YoungPair) -> Result<f64> {
    gauge_norm_with(f, &pair.tau, Level::TauOne)
}

/// Dual-norm lower estimate: the supremum of `int |f g| / N_{tau*}(g)` over a parametric family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualEstimate {
    pub value: f64,
    pub best_candidate: String,
    pub label: String,
}

/// Candidates are `g = 1`, slope profiles `tau'(|f|/s)` and level-set indicators.
pub fn orlicz_dual_norm_with(f: &OrliczSample, pair: &YoungPair, level: Level) -> Result<DualEstimate> {
    let mut best = (0.0, String::from("zero"));
    let mut consider = |g: Vec<f64>, name: String| -> Result<()> {
        if g.iter().any(|v| !v.is_finite()) {
            return Ok(());
        }
        let gs = OrliczSample { values: g, weights: f.weights.clone() };
        let n = match gauge_norm_with(&gs, &pair.tau_star, level) {
            Ok(n) => n,
            Err(Error::Unbounded(_)) => return Ok(()),
            Err(e) => return Err(e),
        };
        if n > 0.0 {
            let num: f64 =
                f.values.iter().zip(&gs.values).zip(f.weights.iter()).map(|((a, b), w)| w * (a * b).abs()).sum();
            let v = num / n;
            if v > best.0 {
                best = (v, name);
            }
        }
        Ok(())
    };
    consider(vec![1.0; f.values.len()], "constant".into())?;
    let n = gauge_norm_with(f, &pair.tau, level)?;
    if n > 0.0 {
        for s in quad::logspace(n / 100.0, n * 100.0, 41) {
            consider(f.values.iter().map(|v| pair.tau.derivative(v.abs() / s)).collect(), format!("slope(s={s:.4e})"))?;
        }
    }
    let mut levels: Vec<f64> = f.values.iter().map(|v| v.abs()).filter(|v| *v > 0.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let stride = (levels.len() / 200).max(1);
    for q in levels.iter().step_by(stride) {
        consider(f.values.iter().map(|v| if v.abs() >= *q { 1.0 } else { 0.0 }).collect(), format!("level(q={q:.4e})"))?;
    }
    Ok(DualEstimate { value: best.0, best_candidate: best.1, label: "dual-norm lower estimate".into() })
}

pub fn orlicz_dual_norm(f: &OrliczSample, pair: &YoungPair) -> Result<DualEstimate> {
    orlicz_dual_norm_with(f, pair, Level::TauOne)
}

fn entropy_integrand(pair: &YoungPair, ts1: f64, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let a = y.abs();
    a * a * (pair.tau_star.inverse(ts1 * a * a) / a).ln()
}

/// `int f^2 log( tau*^{-1}(tau*(1) g^2) / |g| ) dmu` with `g = f / ||f||_2`.
///
/// The functional is 2-homogeneous: scaling `f` by `c` scales it by `c^2`.
pub fn tau_entropy(f: &OrliczSample, pair: &YoungPair) -> Result<f64> {
    let n = f.l2_norm();
    if n == 0.0 {
        return Err(Error::InvalidInput("tau-entropy of the zero function".into()));
    }
    let ts1 = pair.tau_star.eval(1.0);
    let probes: Vec<f64> = [1e-2, 1e-4, 1e-6, 1e-8].iter().map(|&y| entropy_integrand(pair, ts1, y)).collect();
    if probes.iter().any(|v| !v.is_finite()) || probes[3].abs() > 1e-6 || probes[3].abs() > probes[0].abs().max(1e-12) {
        return Err(Error::SingularAtZero(format!("integrand near 0: {probes:?}")));
    }
    Ok(n * n * f.integral(|v| entropy_integrand(pair, ts1, v / n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_pair() -> YoungPair {
        YoungPair::new(YoungFunction::power(2.0, 0.5).unwrap()).unwrap()
    }

    fn uniform(values: Vec<f64>) -> OrliczSample {
        let n = values.len();
        OrliczSample::new(values, Arc::new(vec![1.0 / n as f64; n])).unwrap()
    }

    #[test]
    fn closure_inverse_round_trip() {
        let t = YoungFunction::power(2.0, 1.0).unwrap();
        for y in quad::logspace(1e-6, 1e6, 25) {
            assert!((t.inverse(y) - y.sqrt()).abs() <= 1e-12 * y.sqrt());
        }
    }

    #[test]
    fn quadratic_is_self_dual() {
        let p = quad_pair();
        for y in quad::logspace(1e-3, 1e3, 50) {
            assert!((p.tau_star.eval(y) - 0.5 * y * y).abs() <= 1e-6 * (0.5 * y * y).max(1.0));
        }
        assert!(!p.normalized && (p.tau.eval(1.0) + p.tau_star.eval(1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_conjugate_closed_form() {
        let p = YoungPair::new(YoungFunction::power(3.0, 1.0 / 3.0).unwrap()).unwrap();
        for y in quad::logspace(1e-3, 1e3, 50) {
            let exact = y.powf(1.5) / 1.5;
            assert!((p.tau_star.eval(y) - exact).abs() <= 1e-8 * exact, "y={y}");
        }
    }

    #[test]
    fn gauge_of_square_is_l2() {
        let p = YoungPair::new(YoungFunction::power(2.0, 1.0).unwrap()).unwrap();
        let f = uniform(vec![0.3, -1.2, 2.5, 0.0, 4.0]);
        assert!((gauge_norm(&f, &p).unwrap() - f.l2_norm()).abs() < 1e-12);
        let a = 0.3f64;
        let ind = OrliczSample::new(vec![1.0, 0.0], Arc::new(vec![a, 1.0 - a])).unwrap();
        assert!((gauge_norm(&ind, &p).unwrap() - a.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn constant_has_unit_norms() {
        let p = YoungPair::normalized(YoungFunction::tau_q(2.0, 1.0, FGrowth::f_alpha(1.5).unwrap()).unwrap()).unwrap();
        let one = uniform(vec![1.0; 7]);
        assert!((gauge_norm(&one, &p).unwrap() - 1.0).abs() < 1e-12);
        assert!((orlicz_dual_norm(&one, &p).unwrap().value - 1.0).abs() < 1e-9);
        assert!(tau_entropy(&one, &p).unwrap().abs() < 1e-9);
    }

    #[test]
    fn dual_of_indicator_unit_level() {
        let p = YoungPair::normalized(YoungFunction::power(3.0, 1.0).unwrap()).unwrap();
        let a = 0.2;
        let ind = OrliczSample::new(vec![1.0, 0.0], Arc::new(vec![a, 1.0 - a])).unwrap();
        let d = orlicz_dual_norm_with(&ind, &p, Level::Unit).unwrap();
        let exact = a * p.tau_star.inverse(1.0 / a);
        assert!((d.value - exact).abs() < 1e-9 * exact, "{} vs {exact}", d.value);
    }

    #[test]
    fn delta2_examples() {
        match delta2_check(&YoungFunction::power(2.0, 1.0).unwrap()) {
            Delta2Outcome::Holds(c) => assert!((c.k - 4.0).abs() < 1e-12 && c.y1 == 0.0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(delta2_check(&YoungFunction::exp_square()), Delta2Outcome::Fails { .. }));
        let tq = YoungFunction::tau_q(2.0, 1.0, FGrowth::f_alpha(1.5).unwrap()).unwrap();
        assert!(matches!(delta2_check(&tq), Delta2Outcome::Holds(_)));
    }

    #[test]
    fn nabla2_of_square() {
        let c = nabla2_check(&YoungFunction::power(2.0, 1.0).unwrap()).unwrap();
        assert_eq!(c.l, 2.0);
        assert_eq!(c.y1, 0.0);
    }

    #[test]
    fn non_convex_is_rejected() {
        let t = YoungFunction::from_fn("sqrt", |x: f64| x.sqrt(), |x: f64| 0.5 / x.sqrt());
        assert!(matches!(conjugate(&t, GridSpec::default()), Err(Error::ConvexityViolation(_))));
    }

    #[test]
    fn entropy_is_two_homogeneous() {
        let p = YoungPair::normalized(YoungFunction::example_pair_generator(1.5).unwrap()).unwrap();
        let f = uniform(vec![0.5, 1.5, 3.0, 0.0]);
        let e1 = tau_entropy(&f, &p).unwrap();
        let e2 = tau_entropy(&f.scale(3.0), &p).unwrap();
        assert!((e2 - 9.0 * e1).abs() < 1e-9 * e1.abs().max(1.0));
    }
}
