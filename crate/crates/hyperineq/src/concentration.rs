//! Concentration of Lipschitz functions under a generalized Beckner inequality,
//! and the rate-to-`T` construction for convex rates.

use crate::error::{Error, Result};
use crate::hardy_criteria::{beckner_bt, CriterionReport, TFunction};
use crate::line_measure::{LineMeasure, Potential};
use crate::quad;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An increasing convex rate `Phi` on `[0, inf)` with `Phi(0) = 0`.
#[derive(Clone)]
pub struct ConvexRate {
    phi: ScalarFn,
    dphi: Option<ScalarFn>,
    d2phi: Option<ScalarFn>,
    tag: String,
}

impl fmt::Debug for ConvexRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConvexRate({})", self.tag)
    }
}

impl ConvexRate {
    pub fn from_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(tag: &str, phi: F) -> Self {
        ConvexRate { phi: Arc::new(phi), dphi: None, d2phi: None, tag: tag.to_string() }
    }

    /// `coeff * t^alpha`.
    pub fn power(alpha: f64, coeff: f64) -> Self {
        ConvexRate {
            phi: Arc::new(move |t: f64| coeff * t.max(0.0).powf(alpha)),
            dphi: Some(Arc::new(move |t: f64| {
                if t <= 0.0 {
                    if alpha > 1.0 {
                        0.0
                    } else if alpha == 1.0 {
                        coeff
                    } else {
                        f64::INFINITY
                    }
                } else {
                    coeff * alpha * t.powf(alpha - 1.0)
                }
            })),
            d2phi: Some(Arc::new(move |t: f64| coeff * alpha * (alpha - 1.0) * t.max(0.0).powf(alpha - 2.0))),
            tag: format!("{coeff}*t^{alpha}"),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.phi)(t)
    }

    /// Right derivative.
    pub fn derivative(&self, t: f64) -> f64 {
        match &self.dphi {
            Some(d) => d(t),
            None => {
                let h = f64::EPSILON.sqrt() * t.abs().max(1.0);
                (self.eval(t + h) - self.eval(t)) / h
            }
        }
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        match &self.d2phi {
            Some(d) => d(t),
            None => {
                let h = f64::EPSILON.powf(0.25) * t.abs().max(1.0);
                (self.eval(t + h) - 2.0 * self.eval(t) + self.eval((t - h).max(0.0))) / (h * h)
            }
        }
    }

    /// `Phi^{-1}` by bisection.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.eval(hi) < y && hi < 1e300 {
            hi *= 2.0;
        }
        quad::bisect(|t| self.eval(t) - y, 0.0, hi, 1e-15 * hi, 200)
    }

    /// `theta(x) = Phi'(Phi^{-1}(x))^2`.
    pub fn theta(&self, x: f64) -> f64 {
        self.derivative(self.inverse(x)).powi(2)
    }

    /// `T(x) = 1/theta(1/x)`, `T(0) = 0`.
    pub fn t_function(&self) -> TFunction {
        let r = self.clone();
        TFunction::from_fn(&format!("T[{}]", self.tag), move |x: f64| if x <= 0.0 { 0.0 } else { 1.0 / r.theta(1.0 / x) })
    }

    /// Grid checks: `Phi(0) = 0`, increasing, convex, and `sqrt(Phi)` concave.
    pub fn check(&self) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return Err(Error::ConvexityViolation(format!("Phi(0) = {} for {}", self.eval(0.0), self.tag)));
        }
        let xs = quad::logspace(1e-6, 1e6, 400);
        let v: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
        for i in 1..xs.len() {
            if !(v[i] > v[i - 1]) {
                return Err(Error::ConvexityViolation(format!("{} is not increasing at {}", self.tag, xs[i])));
            }
        }
        for i in 1..xs.len() - 1 {
            let (a, b, c) = (xs[i - 1], xs[i], xs[i + 1]);
            let chord = v[i - 1] + (v[i + 1] - v[i - 1]) * (b - a) / (c - a);
            if v[i] > chord * (1.0 + 1e-10) + 1e-300 {
                return Err(Error::ConvexityViolation(format!("{} is not convex at {b}", self.tag)));
            }
            let (sa, sb, sc) = (v[i - 1].sqrt(), v[i].sqrt(), v[i + 1].sqrt());
            let schord = sa + (sc - sa) * (b - a) / (c - a);
            if sb < schord * (1.0 - 1e-10) {
                return Err(Error::ConvexityViolation(format!("sqrt({}) is not concave at {b}", self.tag)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Gaussian,
    Rate,
}

/// `P(h - mu(h) >= t sqrt(C_T))` bound at normalized deviation `t`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailReport {
    pub t: f64,
    pub bound: f64,
    pub regime: Regime,
    /// Maximizer of `t sqrt(theta(y)) - y` in the rate regime.
    pub y_star: Option<f64>,
    /// `d/dy (t sqrt(theta(y)) - y)` at an interior `y_star`.
    pub stationarity: Option<f64>,
}

/// Tail envelope from a generalized Beckner inequality with constant `C_T`.
#[derive(Debug, Clone)]
pub struct TailEnvelope {
    pub c_t: f64,
    pub t_fn: TFunction,
    /// Boundary `sqrt(T(1))` between the two regimes.
    pub switch: f64,
}

impl TailEnvelope {
    pub fn new(c_t: f64, t_fn: TFunction) -> Result<Self> {
        if !(c_t >= 0.0) {
            return Err(Error::InvalidInput(format!("C_T must be nonnegative, got {c_t}")));
        }
        if !t_fn.nondecreasing || !t_fn.vanishes_at_zero {
            return Err(Error::HypothesisViolation(format!("{t_fn:?} must be nondecreasing with T(0) = 0")));
        }
        let t1 = t_fn.eval(1.0);
        if !(t1 > 0.0) {
            return Err(Error::HypothesisViolation(format!("T(1) = {t1} must be positive")));
        }
        Ok(TailEnvelope { c_t, switch: t1.sqrt(), t_fn })
    }

    pub fn theta(&self, y: f64) -> f64 {
        self.t_fn.theta(y)
    }

    /// `sup_{y >= 1} t sqrt(theta(y)) - y` and its maximizer.
    pub fn rate_sup(&self, t: f64) -> (f64, f64) {
        let obj = |ly: f64| {
            let y = ly.exp();
            t * self.theta(y).sqrt() - y
        };
        let mut top = 12.0 * std::f64::consts::LN_10;
        loop {
            let grid = quad::linspace(0.0, top, 241);
            let (ly, v, idx) = quad::scan_then_golden(&obj, &grid);
            if idx + 1 < grid.len() || top > 600.0 {
                return (v, ly.exp());
            }
            top += 6.0 * std::f64::consts::LN_10;
        }
    }

    /// Bound at normalized deviation `t >= 0`.
    pub fn tail_bound(&self, t: f64) -> TailReport {
        let t1 = self.switch * self.switch;
        if t < self.switch {
            return TailReport {
                t,
                bound: (-t * t / (3.0 * t1)).exp(),
                regime: Regime::Gaussian,
                y_star: None,
                stationarity: None,
            };
        }
        let (s, y) = self.rate_sup(t);
        let stationarity = if y > 1.0 + 1e-6 {
            let h = 1e-6 * y;
            let f = |y: f64| t * self.theta(y).sqrt() - y;
            Some((f(y + h) - f(y - h)) / (2.0 * h))
        } else {
            None
        };
        TailReport {
            t,
            bound: (-std::f64::consts::SQRT_2 * s).exp().min(1.0),
            regime: Regime::Rate,
            y_star: Some(y),
            stationarity,
        }
    }

    /// Bound on `P(h - mu(h) >= r)` for raw deviation `r`.
    pub fn tail_bound_raw(&self, r: f64) -> f64 {
        if self.c_t == 0.0 {
            return if r > 0.0 { 0.0 } else { 1.0 };
        }
        self.tail_bound(r / self.c_t.sqrt()).bound
    }

    /// Ratio of the rate-regime bound to the Gaussian-regime bound at the switch point.
    pub fn jump_factor(&self) -> f64 {
        let t1 = self.switch * self.switch;
        let below = (-self.switch * self.switch / (3.0 * t1)).exp();
        self.tail_bound(self.switch).bound / below
    }
}

/// Envelope with `T` built from a convex rate. Fails when the rate is not
/// increasing, convex, or has non-concave square root.
pub fn convex_rate_envelope(phi: &ConvexRate, c_t: f64) -> Result<TailEnvelope> {
    phi.check()?;
    TailEnvelope::new(c_t, phi.t_function())
}

/// First deviation at which `e^{-sqrt 2 Phi(t/2)}` applies: `sqrt(T(1)) v 2 Phi^{-1}(1)`.
pub fn admissible_threshold(phi: &ConvexRate, env: &TailEnvelope) -> f64 {
    env.switch.max(2.0 * phi.inverse(1.0))
}

/// `e^{-sqrt 2 Phi(t/2)}`.
pub fn simplified_bound(phi: &ConvexRate, t: f64) -> f64 {
    (-std::f64::consts::SQRT_2 * phi.eval(t / 2.0)).exp()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfConsistencyReport {
    pub rate: String,
    pub beckner: CriterionReport,
    /// Upper bound `20 B(T)` for the Beckner constant.
    pub c_t_upper: f64,
    /// Largest `K(x) = theta(Phi(x) + log Phi'(x) + log Z) / Phi'(x)^2` on the large-`x` grid.
    pub k_max: f64,
    pub k_grid_start: f64,
    pub k_within_four: bool,
    /// Deviations `t` (normalized by `sqrt(c)`) from which the product bound holds.
    pub t_threshold: f64,
    pub statement: String,
}

/// Builds `e^{-Phi(|x|)}/Z`, computes `B(T)` for `T` derived from `Phi`, and
/// re-checks `K(x) <= 4` for large `x`.
pub fn selfconsistency_cc(phi: &ConvexRate) -> Result<SelfConsistencyReport> {
    phi.check().map_err(|e| Error::HypothesisViolation(e.to_string()))?;
    let (p0, p1, p2) = (phi.clone(), phi.clone(), phi.clone());
    let pot = Potential::from_fn(&format!("{}(|x|)", phi.tag), move |x: f64| p0.eval(x.abs()))
        .with_derivatives(move |x: f64| p1.derivative(x.abs()) * x.signum(), move |x: f64| p2.second_derivative(x.abs()))
        .symmetric(true)
        .with_breakpoints(vec![0.0]);
    let m = LineMeasure::new(pot, 1.0)?;
    let t_fn = phi.t_function();
    if !(t_fn.nondecreasing && t_fn.vanishes_at_zero && t_fn.ratio_monotone) {
        return Err(Error::HypothesisViolation(format!("{t_fn:?} lacks the required monotonicity")));
    }
    let beckner = beckner_bt(&m, &t_fn)?;
    let log_z = m.log_z();
    let x1 = phi.inverse(1.0);
    let mut x0 = x1.max(1e-3);
    while !(phi.derivative(x0).ln() + log_z <= phi.eval(x0)) {
        x0 *= 1.5;
        if x0 > 1e12 {
            return Err(Error::HypothesisViolation("log Phi' + log Z never falls below Phi".into()));
        }
    }
    let x_end = phi.inverse(1e12);
    let mut k_max: f64 = 0.0;
    for x in quad::logspace(x0, x_end.max(2.0 * x0), 300) {
        let d = phi.derivative(x);
        let k = phi.theta(phi.eval(x) + d.ln() + log_z) / (d * d);
        k_max = k_max.max(k);
    }
    let c_t_upper = 20.0 * beckner.constant;
    let t_threshold = (2.0 * x1).max(1.0 / phi.derivative(x1));
    let statement = format!(
        "P(h - E h >= t sqrt({c_t_upper:.6e})) <= exp(-sqrt(2) Phi(t/2)) for t >= {t_threshold:.6}, every n, 1-Lipschitz h"
    );
    Ok(SelfConsistencyReport {
        rate: phi.tag.clone(),
        beckner,
        c_t_upper,
        k_max,
        k_grid_start: x0,
        k_within_four: k_max <= 4.0 * (1.0 + 1e-9),
        t_threshold,
        statement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_regime_at_boundary() {
        let env = TailEnvelope::new(1.0, TFunction::power(1.0)).unwrap();
        let r = env.tail_bound(1.0 - 1e-15);
        assert!((r.bound - (-1.0f64 / 3.0).exp()).abs() < 1e-12);
        assert_eq!(env.tail_bound(0.0).bound, 1.0);
        assert_eq!(env.tail_bound(1.0).regime, Regime::Rate);
    }

    #[test]
    fn quadratic_rate_gives_linear_t() {
        let phi = ConvexRate::power(2.0, 0.25);
        let t = phi.t_function();
        for x in [1e-3, 0.1, 0.5, 1.0] {
            assert!((t.eval(x) - x).abs() < 1e-9 * x.max(1e-3), "{x}");
        }
    }

    #[test]
    fn simplified_bound_is_dominated() {
        let phi = ConvexRate::power(1.5, 1.0);
        let env = convex_rate_envelope(&phi, 1.0).unwrap();
        let t0 = admissible_threshold(&phi, &env);
        for t in quad::logspace(t0, 1e3 * t0, 60) {
            let r = env.tail_bound(t);
            assert!(r.bound <= simplified_bound(&phi, t) * (1.0 + 1e-9), "t={t}");
            if let Some(s) = r.stationarity {
                assert!(s.abs() < 1e-6, "t={t} s={s}");
            }
        }
    }

    #[test]
    fn linear_rate_is_admissible() {
        assert!(convex_rate_envelope(&ConvexRate::power(1.0, 1.0), 1.0).is_ok());
    }

    #[test]
    fn concave_rate_rejected() {
        let phi = ConvexRate::power(0.8, 1.0);
        assert!(matches!(convex_rate_envelope(&phi, 1.0), Err(Error::ConvexityViolation(_))));
        assert!(matches!(selfconsistency_cc(&phi), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn selfconsistency_examples() {
        for a in [1.5, 2.0] {
            let r = selfconsistency_cc(&ConvexRate::power(a, 1.0)).unwrap();
            assert!(r.beckner.constant.is_finite() && r.k_within_four, "{r:?}");
        }
    }
}
