//! One-dimensional criterion constants for Poincaré, Beckner-type, additive
//! phi-Sobolev and log^beta Sobolev inequalities.
//!
//! Each constant is a supremum over `x` of a half-line weight
//! `a(x) * g(a(x)) * int_m^x 1/rho`, where `a(x)` is the outer tail mass
//! beyond `x` and `g` depends on the family.

use crate::error::{Error, Result};
use crate::fgrowth::FGrowth;
use crate::line_measure::{LineMeasure, Potential};
use crate::quad;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Poincare,
    BecknerP,
    BecknerT,
    PhiSobolev,
    RosenBeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridStats {
    pub points_per_side: usize,
    /// Relative change of the supremum produced by golden-section refinement.
    pub refinement_gain: f64,
    pub truncation_minus: f64,
    pub truncation_plus: f64,
}

/// Result of a criterion scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    pub family: Family,
    /// `max(plus, minus)`.
    pub constant: f64,
    pub extremizer: f64,
    pub side: Side,
    pub plus: f64,
    pub minus: f64,
    pub lower_factor: f64,
    pub upper_factor: f64,
    /// Lower bound for the optimal inequality constant implied by the criterion.
    pub bracket_lo: f64,
    /// Upper bound for the optimal inequality constant implied by the criterion.
    pub bracket_hi: f64,
    pub convention: String,
    pub grid: GridStats,
    pub extras: BTreeMap<String, f64>,
}

struct SideScan {
    value: f64,
    at: f64,
    gain: f64,
    end: f64,
}

/// Supremum over one side of `exp(lw(x))` with the divergence rule.
fn scan_side(m: &LineMeasure, side: Side, log_g: &dyn Fn(f64) -> f64, points: usize) -> Result<SideScan> {
    let med = m.median();
    let (lo, hi) = m.window();
    let span = match side {
        Side::Plus => hi - med,
        Side::Minus => med - lo,
    };
    let sgn = if side == Side::Plus { 1.0 } else { -1.0 };
    let dmin = (m.tol() * med.abs().max(1.0)).min(span * 1e-3);
    let ds = quad::logspace(dmin, span, points);
    let lw = |d: f64| {
        let x = (med + sgn * d).clamp(lo, hi);
        let la = if side == Side::Plus { m.log_upper_tail(x) } else { m.log_lower_tail(x) };
        let v = la + log_g(la.exp()) + m.log_inverse_density_integral(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let vals: Vec<f64> = ds.iter().map(|&d| lw(d)).collect();
    let (ibest, &vbest) = vals
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
    let n = vals.len();
    let interior_ref = ds
        .iter()
        .zip(&vals)
        .filter(|(&d, _)| {
            let x = med + sgn * d;
            m.outer_tail(x) >= 1e-3
        })
        .map(|(_, &v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let rising = vals[n - 1] > vals[n - 2] && vals[n - 2] > vals[n - 3];
    if rising && vals[n - 1] > interior_ref + 10f64.ln() {
        return Err(Error::UnboundedSupremum(format!(
            "weight at truncation x={} is {:.3e}, interior max {:.3e}, still rising",
            med + sgn * ds[n - 1],
            vals[n - 1].exp(),
            interior_ref.exp()
        )));
    }
    let (mut d_star, mut v_star) = (ds[ibest], vbest);
    if ibest > 0 && ibest + 1 < n {
        let (d, v) = quad::golden_max(lw, ds[ibest - 1], ds[ibest + 1], 1e-12);
        if v > v_star {
            d_star = d;
            v_star = v;
        }
    }
    let gain = if vbest.is_finite() { (v_star - vbest).exp_m1().abs() } else { 0.0 };
    Ok(SideScan { value: v_star.exp(), at: med + sgn * d_star, gain, end: med + sgn * span })
}

fn run(
    m: &LineMeasure,
    family: Family,
    log_g: &dyn Fn(f64) -> f64,
    factors: (f64, f64),
    convention: &str,
) -> Result<CriterionReport> {
    const POINTS: usize = 800;
    let p = scan_side(m, Side::Plus, log_g, POINTS)?;
    let q = scan_side(m, Side::Minus, log_g, POINTS)?;
    let (constant, extremizer, side) = if p.value >= q.value {
        (p.value, p.at, Side::Plus)
    } else {
        (q.value, q.at, Side::Minus)
    };
    Ok(CriterionReport {
        family,
        constant,
        extremizer,
        side,
        plus: p.value,
        minus: q.value,
        lower_factor: factors.0,
        upper_factor: factors.1,
        bracket_lo: factors.0 * constant,
        bracket_hi: factors.1 * constant,
        convention: convention.to_string(),
        grid: GridStats {
            points_per_side: POINTS,
            refinement_gain: p.gain.max(q.gain),
            truncation_minus: q.end,
            truncation_plus: p.end,
        },
        extras: BTreeMap::new(),
    })
}

/// `B = max_side sup_x mu(tail) int 1/rho`. The optimal Poincaré constant lies in `[B, 4B]`.
pub fn poincare_b(m: &LineMeasure) -> Result<CriterionReport> {
    run(m, Family::Poincare, &|_| 0.0, (1.0, 4.0), "Var(f) <= C_P int f'^2 dmu; C_P in [B, 4B]")
}

/// Weight `a (1 - (1 + 1/a)^{(p-2)/p})` for the fixed-exponent Beckner inequality.
pub fn beckner_b(m: &LineMeasure, p: f64) -> Result<CriterionReport> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::DomainError(format!("p must lie in (1,2), got {p}")));
    }
    let e = (p - 2.0) / p;
    let lg = move |a: f64| (-(e * (1.0 / a).ln_1p()).exp_m1()).ln();
    let mut r = run(
        m,
        Family::BecknerP,
        &lg,
        (0.5, 20.0),
        "int f^2 - (int |f|^p)^{2/p} <= C (2-p) int f'^2 dmu; C in [B/2, 20B]",
    )?;
    r.extras.insert("p".into(), p);
    Ok(r)
}

type TFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A rate function `T: [0,1] -> [0, inf)` with re-verified shape flags.
#[derive(Clone)]
pub struct TFunction {
    f: TFn,
    tag: String,
    pub nondecreasing: bool,
    pub vanishes_at_zero: bool,
    /// `T(x)/x` non-increasing on `(0,1]`.
    pub ratio_monotone: bool,
}

impl fmt::Debug for TFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TFunction({}, nondecreasing={}, T(0)=0:{}, ratio_monotone={})",
            self.tag, self.nondecreasing, self.vanishes_at_zero, self.ratio_monotone
        )
    }
}

impl TFunction {
    pub fn from_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(tag: &str, f: F) -> Self {
        let xs = quad::logspace(1e-12, 1.0, 400);
        let nondecreasing = xs.windows(2).all(|w| f(w[1]) >= f(w[0]) * (1.0 - 1e-12));
        let ratio_monotone = xs.windows(2).all(|w| f(w[1]) / w[1] <= f(w[0]) / w[0] * (1.0 + 1e-12));
        let vanishes_at_zero = f(0.0) == 0.0;
        TFunction { f: Arc::new(f), tag: tag.to_string(), nondecreasing, vanishes_at_zero, ratio_monotone }
    }

    /// `x^beta`.
    pub fn power(beta: f64) -> Self {
        Self::from_fn(&format!("x^{beta}"), move |x: f64| if x == 0.0 { 0.0 } else { x.powf(beta) })
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(&format!("{c}"), move |_| c)
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// `theta(y) = 1 / T(1/y)` for `y >= 1`.
    pub fn theta(&self, y: f64) -> f64 {
        1.0 / self.eval(1.0 / y)
    }

    fn sandwich_applies(&self) -> bool {
        self.nondecreasing && self.vanishes_at_zero && self.ratio_monotone
    }
}

/// `T~(X) = sup_{p in (1,2)} (1 - X^{(p-2)/p}) / T(2-p)`.
///
/// With `b = (2-p)/p in (0,1)` the objective is `(1 - X^{-b}) / T(2b/(1+b))`;
/// a log grid on `b` is refined by golden section. When the shape flags of `T`
/// hold, the result is checked against `[1/(3T(1/log X)), 1/T(1/log X)]`.
pub fn ttilde(t: &TFunction, x: f64) -> Result<f64> {
    if !(x >= std::f64::consts::E * (1.0 - 1e-15)) {
        return Err(Error::DomainError(format!("T~ needs X >= e, got {x}")));
    }
    let l = x.ln();
    let obj = |b: f64| {
        if !(b > 0.0 && b <= 1.0) {
            return f64::NEG_INFINITY;
        }
        -(-b * l).exp_m1() / t.eval(2.0 * b / (1.0 + b))
    };
    let grid = quad::logspace(1e-10, 1.0, 121);
    let (_, v, _) = quad::scan_then_golden(&obj, &grid);
    if t.sandwich_applies() {
        let upper = 1.0 / t.eval(1.0 / l);
        let lower = upper / 3.0;
        if v < lower * (1.0 - 1e-9) || v > upper * (1.0 + 1e-9) {
            return Err(Error::SandwichViolation(format!(
                "T~({x}) = {v} outside [{lower}, {upper}] for T = {}",
                t.tag
            )));
        }
    }
    Ok(v)
}

/// Weight `a T~(1 + 1/a)` for the generalized Beckner inequality.
pub fn beckner_bt(m: &LineMeasure, t: &TFunction) -> Result<CriterionReport> {
    let err = std::sync::Mutex::new(None);
    let lg = |a: f64| match ttilde(t, 1.0 + 1.0 / a) {
        Ok(v) => v.ln(),
        Err(e) => {
            *err.lock().expect("lock") = Some(e);
            f64::NEG_INFINITY
        }
    };
    let r = run(
        m,
        Family::BecknerT,
        &lg,
        (0.5, 20.0),
        "sup_p (int f^2 - (int |f|^p)^{2/p}) / T(2-p) <= C int f'^2 dmu; C in [B(T)/2, 20 B(T)]",
    );
    if let Some(e) = err.into_inner().expect("lock") {
        return Err(e);
    }
    r
}

/// Certified shape constants of an additive growth function `phi`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhiCertificate {
    pub gamma: f64,
    pub m: f64,
    pub phi_at_8: f64,
}

/// Scans `phi` for monotonicity, concavity, `x phi'(x) <= gamma` and
/// `phi(xy) <= M + phi(x) + phi(y)`.
pub fn certify_phi(phi: &FGrowth) -> Result<PhiCertificate> {
    let xs = quad::logspace(1e-6, 1e12, 400);
    let mut gamma: f64 = 0.0;
    for &x in &xs {
        let d1 = phi.d1(x);
        let d2 = phi.d2(x);
        if d1 < 0.0 {
            return Err(Error::HypothesisViolation(format!("phi={} decreases at x={x}", phi.tag())));
        }
        if d2 > 1e-12 * (1.0 + d1 / x) {
            return Err(Error::HypothesisViolation(format!("phi={} is not concave at x={x}", phi.tag())));
        }
        gamma = gamma.max(x * d1);
    }
    let ys = quad::logspace(1e-6, 1e12, 150);
    let mut m: f64 = 0.0;
    for &x in &ys {
        for &y in &ys {
            m = m.max(phi.eval(x * y) - phi.eval(x) - phi.eval(y));
        }
    }
    let phi8 = phi.eval(8.0);
    if !(phi8 > 0.0) {
        return Err(Error::HypothesisViolation(format!("phi(8) = {phi8} is not positive")));
    }
    Ok(PhiCertificate { gamma, m, phi_at_8: phi8 })
}

/// `D = max_side sup_x a phi(2/a) int 1/rho`, with the final additive constant
/// `144 gamma B + 24 (1 + M/phi(8)) D`.
pub fn phi_sobolev_d(m: &LineMeasure, phi: &FGrowth) -> Result<CriterionReport> {
    let cert = certify_phi(phi)?;
    let b = poincare_b(m)?.constant;
    let lg = |a: f64| phi.eval(2.0 / a).ln();
    let factor = 24.0 * (1.0 + cert.m / cert.phi_at_8);
    let mut r = run(
        m,
        Family::PhiSobolev,
        &lg,
        (0.0, factor),
        "int Phi(f^2) - Phi(int f^2) <= (144 gamma B + 24(1+M/phi(8)) D) int f'^2 dmu, Phi(x) = x phi(x)",
    )?;
    let total = 144.0 * cert.gamma * b + factor * r.constant;
    r.bracket_hi = total;
    r.extras.insert("gamma".into(), cert.gamma);
    r.extras.insert("M".into(), cert.m);
    r.extras.insert("phi_at_8".into(), cert.phi_at_8);
    r.extras.insert("poincare_B".into(), b);
    r.extras.insert("final_constant".into(), total);
    Ok(r)
}

/// Constant of the final log^beta Sobolev bound `K D`.
pub const ROSEN_K: f64 = 168.0;

/// `D = max_side sup_x a log^beta(1 + 2/a) int 1/rho`.
pub fn rosen_d(m: &LineMeasure, beta: f64) -> Result<CriterionReport> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::DomainError(format!("beta must lie in (0,1], got {beta}")));
    }
    let lg = move |a: f64| beta * (2.0 / a).ln_1p().ln();
    let mut r = run(
        m,
        Family::RosenBeta,
        &lg,
        (0.0, ROSEN_K),
        "int f^2 log^beta(1+f^2) - mu(f^2) log^beta(1+mu(f^2)) <= K D int f'^2 dmu, K = 168",
    )?;
    r.extras.insert("beta".into(), beta);
    r.extras.insert("K_times_D".into(), ROSEN_K * r.constant);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub verdict: Verdict,
    /// Onset `A` beyond which `sign(x) V'(x) > 0` on the probe grid.
    pub onset: f64,
    pub curvature_ratio_last: f64,
    /// `(x, theta(V + log V' + log Z) / V'^2)` samples on each side.
    pub ratios_plus: Vec<(f64, f64)>,
    pub ratios_minus: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

fn side_verdict(ratios: &[(f64, f64)]) -> Verdict {
    if ratios.len() < 7 {
        return Verdict::Inconclusive;
    }
    let slopes: Vec<f64> = ratios
        .windows(2)
        .map(|w| (w[1].1.ln() - w[0].1.ln()) / (w[1].0.ln() - w[0].0.ln()))
        .collect();
    let last = &slopes[slopes.len() - 5..];
    if last.iter().all(|s| s.abs() <= 0.02) || last.iter().all(|&s| s <= 0.0) {
        return Verdict::Satisfied;
    }
    if last.iter().all(|&s| s >= 0.05) && last[4] >= 0.5 * last[0] {
        return Verdict::Violated;
    }
    Verdict::Inconclusive
}

/// Large-`x` sampling of the sufficient conditions for a generalized Beckner inequality:
/// (i) `sign(x) V' > 0` eventually, (ii) `V''/V'^2 -> 0`, (iii) bounded
/// `theta(V + log V' + log Z)/V'^2`. A verdict is only issued when the sampled
/// log-slopes have settled; drifting sequences give `Inconclusive`.
pub fn asymptotic_check(v: &Potential, t: &TFunction) -> Result<AsymptoticReport> {
    let log_z = LineMeasure::new(v.clone(), 1.0)?.log_z();
    let mut notes = Vec::new();
    let ks: Vec<i32> = (0..=60).collect();
    let mut onset = f64::INFINITY;
    for &k in ks.iter().rev() {
        let x = 2f64.powi(k);
        if v.evaluate(x) > 1e15 || v.evaluate(-x) > 1e15 {
            continue;
        }
        if v.derivative(x) > 0.0 && v.derivative(-x) < 0.0 {
            onset = x;
        } else {
            break;
        }
    }
    if !onset.is_finite() {
        return Ok(AsymptoticReport {
            verdict: Verdict::Violated,
            onset,
            curvature_ratio_last: f64::NAN,
            ratios_plus: vec![],
            ratios_minus: vec![],
            notes: vec!["condition (i) fails at the largest probes".into()],
        });
    }
    let mut curv = Vec::new();
    let mut sample = |sgn: f64| -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &k in &ks {
            let x = 2f64.powi(k);
            if x < onset.max(2.0) {
                continue;
            }
            let val = v.evaluate(sgn * x);
            if val > 1e15 {
                break;
            }
            let d = v.derivative(sgn * x).abs();
            let arg = val + d.ln() + log_z;
            if arg < 1.0 {
                continue;
            }
            curv.push((x, (v.second_derivative(sgn * x) / (d * d)).abs()));
            out.push((x, t.theta(arg) / (d * d)));
        }
        out
    };
    let rp = sample(1.0);
    let rm = sample(-1.0);
    curv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let curvature_ratio_last = curv.last().map(|c| c.1).unwrap_or(f64::NAN);
    let curvature_ok = curvature_ratio_last < 1e-2;
    if !curvature_ok {
        notes.push(format!("condition (ii): |V''|/V'^2 = {curvature_ratio_last:.3e} at the largest sample"));
    }
    let (vp, vm) = (side_verdict(&rp), side_verdict(&rm));
    let verdict = if vp == Verdict::Violated || vm == Verdict::Violated {
        Verdict::Violated
    } else if vp == Verdict::Satisfied && vm == Verdict::Satisfied && curvature_ok {
        Verdict::Satisfied
    } else {
        Verdict::Inconclusive
    };
    Ok(AsymptoticReport { verdict, onset, curvature_ratio_last, ratios_plus: rp, ratios_minus: rm, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace() -> LineMeasure {
        LineMeasure::new(Potential::abs_power(1.0, 1.0).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn laplace_poincare_constant_is_one() {
        let r = poincare_b(&laplace()).unwrap();
        assert!((r.constant - 1.0).abs() < 1e-4, "{}", r.constant);
        assert!(r.bracket_lo <= 4.0 && 4.0 <= r.bracket_hi);
    }

    #[test]
    fn slow_potential_has_no_poincare() {
        let m = LineMeasure::new(Potential::abs_power(0.5, 1.0).unwrap(), 1.0).unwrap();
        assert!(matches!(poincare_b(&m), Err(Error::UnboundedSupremum(_))));
    }

    #[test]
    fn ttilde_at_e_for_identity() {
        let v = ttilde(&TFunction::power(1.0), std::f64::consts::E).unwrap();
        assert!((v - (1.0 - (-1f64).exp())).abs() < 1e-9);
    }

    #[test]
    fn ttilde_for_constant_rate() {
        let x = 10.0;
        let v = ttilde(&TFunction::constant(1.0), x).unwrap();
        assert!((v - (1.0 - 1.0 / x)).abs() < 1e-9);
    }

    #[test]
    fn laplace_has_no_log_sobolev() {
        assert!(matches!(phi_sobolev_d(&laplace(), &FGrowth::Log), Err(Error::UnboundedSupremum(_))));
        assert!(matches!(rosen_d(&laplace(), 1.0), Err(Error::UnboundedSupremum(_))));
    }

    #[test]
    fn gaussian_log_sobolev_is_finite() {
        let m = LineMeasure::new(Potential::abs_power(2.0, 2.0).unwrap(), 1.0).unwrap();
        let r = phi_sobolev_d(&m, &FGrowth::Log).unwrap();
        assert!(r.constant.is_finite() && r.constant > 0.0, "{r:?}");
        assert!((r.extras["gamma"] - 1.0).abs() < 1e-9 && r.extras["M"].abs() < 1e-9);
    }

    #[test]
    fn asymptotic_examples() {
        let v15 = Potential::abs_power(1.5, 1.0).unwrap();
        assert_eq!(asymptotic_check(&v15, &TFunction::power(2.0 / 3.0)).unwrap().verdict, Verdict::Satisfied);
        let v12 = Potential::abs_power(1.2, 1.0).unwrap();
        assert_eq!(asymptotic_check(&v12, &TFunction::power(1.0)).unwrap().verdict, Verdict::Violated);
        let v2 = Potential::abs_power(2.0, 1.0).unwrap();
        assert_eq!(asymptotic_check(&v2, &TFunction::power(1.0)).unwrap().verdict, Verdict::Satisfied);
    }
}
