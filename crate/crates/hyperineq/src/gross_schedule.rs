//! Hypercontractivity schedules in Orlicz norms from a homogeneous F-Sobolev
//! inequality, the converse direction, and tightening arithmetic.

use crate::error::{Error, Result};
use crate::fgrowth::FGrowth;
use crate::interp::Pchip;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

type RateFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    CriterionDerived,
    User,
}

/// `C_F int |grad f|^2 + C~_F int f^2` together with the certified `k(q)`, `l(q)`, `m`.
#[derive(Clone)]
pub struct SobolevBudget {
    pub c_f: f64,
    pub c_tilde_f: f64,
    pub p: f64,
    pub growth: Option<FGrowth>,
    k: RateFn,
    l: RateFn,
    pub m: f64,
    pub provenance: Provenance,
}

impl fmt::Debug for SobolevBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SobolevBudget")
            .field("c_f", &self.c_f)
            .field("c_tilde_f", &self.c_tilde_f)
            .field("p", &self.p)
            .field("growth", &self.growth.as_ref().map(|g| g.tag()))
            .field("k(0)", &self.k(0.0))
            .field("l(0)", &self.l(0.0))
            .field("m", &self.m)
            .finish()
    }
}

pub fn k_ceiling(p: f64) -> f64 {
    4.0 * (p - 1.0) / p
}

impl SobolevBudget {
    pub fn new<K, L>(c_f: f64, c_tilde_f: f64, p: f64, k: K, l: L, m: f64) -> Result<Self>
    where
        K: Fn(f64) -> f64 + Send + Sync + 'static,
        L: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let b = SobolevBudget {
            c_f,
            c_tilde_f,
            p,
            growth: None,
            k: Arc::new(k),
            l: Arc::new(l),
            m,
            provenance: Provenance::User,
        };
        b.validate()?;
        Ok(b)
    }

    /// Constant `k`, `l`.
    pub fn constant(c_f: f64, c_tilde_f: f64, p: f64, k: f64, l: f64, m: f64) -> Result<Self> {
        Self::new(c_f, c_tilde_f, p, move |_| k, move |_| l, m)
    }

    /// `F = log` with `k = 4(p-1)/p`, `l(q) = 1/(q+1)`, `m = 0`.
    pub fn log_sobolev(p: f64, c_ls: f64) -> Result<Self> {
        let k = k_ceiling(p);
        let mut b = Self::new(c_ls, 0.0, p, move |_| k, |q| 1.0 / (q + 1.0), 0.0)?;
        b.growth = Some(FGrowth::Log);
        Ok(b)
    }

    /// `F = F_alpha` with `k = min(5 - 4/alpha, 4(p-1)/p)`, `l = 1`, `m = 1`.
    pub fn f_alpha(alpha: f64, p: f64, c_f: f64, c_tilde_f: f64) -> Result<Self> {
        let g = FGrowth::f_alpha(alpha)?;
        let k = (5.0 - 4.0 / alpha).min(k_ceiling(p));
        let mut b = Self::constant(c_f, c_tilde_f, p, k, 1.0, 1.0)?;
        b.growth = Some(g);
        Ok(b)
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    pub fn k(&self, q: f64) -> f64 {
        (self.k)(q)
    }

    pub fn l(&self, q: f64) -> f64 {
        (self.l)(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_f > 0.0 && self.c_f.is_finite()) {
            return Err(Error::InvalidInput(format!("C_F must be positive, got {}", self.c_f)));
        }
        if !(self.c_tilde_f >= 0.0) || !(self.m >= 0.0) {
            return Err(Error::InvalidInput("C~_F and m must be nonnegative".into()));
        }
        if !(self.p > 1.0) {
            return Err(Error::DomainError(format!("p must exceed 1, got {}", self.p)));
        }
        let ceil = k_ceiling(self.p);
        for i in 0..=200 {
            let q = if i == 0 { 0.0 } else { 10f64.powf(-4.0 + 8.0 * i as f64 / 200.0) };
            let (k, l) = (self.k(q), self.l(q));
            if !(k > 0.0) || k > ceil * (1.0 + 1e-12) {
                return Err(Error::ConditionViolated(format!("k({q}) = {k} outside (0, {ceil}]")));
            }
            if !(l > 0.0) {
                return Err(Error::ConditionViolated(format!("l({q}) = {l} is not positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScheduleNode {
    pub t: f64,
    pub q: f64,
    /// `int_0^q l(u) du`.
    pub l_integral: f64,
    /// Prefactor exponent `r(t) = (m q + C~_F int_0^q l) / p`.
    pub r: f64,
    pub q_rate: f64,
}

/// Tabulated solution of `q' = k(q)/(l(q) C_F)`, `q(0) = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Schedule {
    pub p: f64,
    pub c_f: f64,
    pub nodes: Vec<ScheduleNode>,
    /// Largest `q' - k(q)/(l(q) C_F)` over accepted nodes.
    pub max_rate_excess: f64,
}

const LOCAL_TOL: f64 = 1e-9;

/// Integrates the schedule with classical RK4 and step doubling.
pub fn integrate_schedule(b: &SobolevBudget, horizon: f64) -> Result<Schedule> {
    b.validate()?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidInput(format!("horizon must be positive, got {horizon}")));
    }
    let rhs = |y: [f64; 2]| {
        let q = y[0].max(0.0);
        let k = b.k(q);
        [k / (b.l(q) * b.c_f), k / b.c_f]
    };
    let rk4 = |y: [f64; 2], h: f64| {
        let add = |a: [f64; 2], s: f64, d: [f64; 2]| [a[0] + s * d[0], a[1] + s * d[1]];
        let k1 = rhs(y);
        let k2 = rhs(add(y, h / 2.0, k1));
        let k3 = rhs(add(y, h / 2.0, k2));
        let k4 = rhs(add(y, h, k3));
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    };
    let node = |t: f64, y: [f64; 2]| {
        let d = rhs(y);
        ScheduleNode {
            t,
            q: y[0],
            l_integral: y[1],
            r: (b.m * y[0] + b.c_tilde_f * y[1]) / b.p,
            q_rate: d[0],
        }
    };
    let mut t = 0.0;
    let mut y = [0.0, 0.0];
    let mut h = horizon / 64.0;
    let mut nodes = vec![node(0.0, y)];
    while t < horizon {
        if t + h > horizon {
            h = horizon - t;
        }
        let full = rk4(y, h);
        let half = rk4(rk4(y, h / 2.0), h / 2.0);
        let scale = 1.0 + half[0].abs().max(half[1].abs());
        let err = (half[0] - full[0]).abs().max((half[1] - full[1]).abs()) / 15.0;
        if err <= LOCAL_TOL * scale {
            t += h;
            y = [half[0] + (half[0] - full[0]) / 15.0, half[1] + (half[1] - full[1]) / 15.0];
            nodes.push(node(t, y));
            let grow = if err == 0.0 { 2.0 } else { (0.9 * (LOCAL_TOL * scale / err).powf(0.2)).min(2.0) };
            h *= grow;
        } else {
            h *= (0.9 * (LOCAL_TOL * scale / err).powf(0.2)).max(0.1);
            if h < 1e-14 * horizon {
                return Err(Error::StiffnessFailure(format!("step underflow at t={t}")));
            }
        }
    }
    let max_rate_excess = nodes
        .iter()
        .map(|n| n.q_rate - b.k(n.q) / (b.l(n.q) * b.c_f))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Schedule { p: b.p, c_f: b.c_f, nodes, max_rate_excess })
}

impl Schedule {
    fn locate(&self, t: f64) -> usize {
        let i = self.nodes.partition_point(|n| n.t <= t);
        i.clamp(1, self.nodes.len() - 1) - 1
    }

    /// `q(t)` by cubic Hermite interpolation between nodes.
    pub fn q_at(&self, t: f64) -> f64 {
        let i = self.locate(t);
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let h = b.t - a.t;
        let s = ((t - a.t) / h).clamp(0.0, 1.0);
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        h00 * a.q + h10 * h * a.q_rate + h01 * b.q + h11 * h * b.q_rate
    }

    /// Prefactor exponent `r(t)`, interpolated monotonically.
    pub fn r_at(&self, t: f64) -> f64 {
        let i = self.locate(t);
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let s = ((t - a.t) / (b.t - a.t)).clamp(0.0, 1.0);
        a.r + s * (b.r - a.r)
    }

    /// `e^{r(t)}`, the constant in `N_{tau_q(t)}(P_t f) <= e^{r(t)} ||f||_p`.
    pub fn prefactor(&self, t: f64) -> f64 {
        self.r_at(t).exp()
    }

    pub fn horizon(&self) -> f64 {
        self.nodes.last().map(|n| n.t).unwrap_or(0.0)
    }

    /// `(q'(0), r(0), r'(0))`.
    pub fn rates_at_zero(&self) -> (f64, f64, f64) {
        let (a, b) = (&self.nodes[0], &self.nodes[1]);
        let r_rate = (b.r - a.r) / (b.t - a.t);
        (a.q_rate, a.r, r_rate)
    }

    /// Uniform samples `(t, q(t), e^{r(t)})`.
    pub fn dump(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let t1 = self.horizon();
        (0..n)
            .map(|i| {
                let t = t1 * i as f64 / (n.max(2) - 1) as f64;
                (t, self.q_at(t), self.prefactor(t))
            })
            .collect()
    }

    /// `q` as a PCHIP table over the accepted nodes.
    pub fn q_table(&self) -> Result<Pchip> {
        Pchip::new(self.nodes.iter().map(|n| n.t).collect(), self.nodes.iter().map(|n| n.q).collect())
    }
}

/// Coefficients `(4(p-1)/(p q'(0)), p r'(0) e^{r(0)} / q'(0))` of the F-Sobolev
/// inequality implied by a contraction estimate.
pub fn converse_fsobolev(p: f64, q_rate: f64, r0: f64, r_rate: f64) -> Result<(f64, f64)> {
    if !(p > 1.0) {
        return Err(Error::DomainError(format!("p must exceed 1, got {p}")));
    }
    if !(q_rate > 0.0) {
        return Err(Error::DomainError(format!("q'(0) must be positive, got {q_rate}")));
    }
    Ok((4.0 * (p - 1.0) / (p * q_rate), p * r_rate * r0.exp() / q_rate))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TightenMode {
    Cutoff { rho: f64 },
    Rothaus { c_rot: Option<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TightReport {
    pub value: f64,
    pub mode: TightenMode,
    pub label: String,
}

/// Removes the defective term: `((rho+1)/rho)^2 (C_F + C_P C~_F)` or
/// `C_F + C_P (C~_F + C_Rot)`.
pub fn tighten(c_f: f64, c_tilde_f: f64, c_p: f64, mode: TightenMode) -> Result<TightReport> {
    if !(c_p >= 0.0 && c_p.is_finite()) {
        return Err(Error::InvalidInput(format!("C_P must be finite and nonnegative, got {c_p}")));
    }
    match mode {
        TightenMode::Cutoff { rho } => {
            if !(rho > 0.0) {
                return Err(Error::DomainError(format!("rho must be positive, got {rho}")));
            }
            let f = (rho + 1.0) / rho;
            Ok(TightReport { value: f * f * (c_f + c_p * c_tilde_f), mode, label: "cutoff".into() })
        }
        TightenMode::Rothaus { c_rot: None } => Err(Error::MissingRothausConstant),
        TightenMode::Rothaus { c_rot: Some(r) } => Ok(TightReport {
            value: c_f + c_p * (c_tilde_f + r),
            mode,
            label: "empirical Rothaus constant".into(),
        }),
    }
}

/// `1 / (4F'(1) + 2F''(1))`, an upper bound for the Poincaré constant.
pub fn spectral_from_fsobolev(f: &FGrowth) -> Result<f64> {
    let c = 4.0 * f.d1(1.0) + 2.0 * f.d2(1.0);
    if !(c > 0.0) {
        return Err(Error::NonpositiveCurvature(format!("4F'(1)+2F''(1) = {c} for F = {}", f.tag())));
    }
    Ok(1.0 / c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gross_closed_form() {
        let (p, c) = (2.0, 1.5);
        let s = integrate_schedule(&SobolevBudget::log_sobolev(p, c).unwrap(), 3.0 * c).unwrap();
        for i in 0..=60 {
            let t = 3.0 * c * i as f64 / 60.0;
            let exact = (4.0 * (p - 1.0) * t / (p * c)).exp_m1();
            assert!((s.q_at(t) - exact).abs() <= 1e-6 * exact.max(1e-12), "t={t}");
        }
        assert!(s.max_rate_excess <= 1e-10);
    }

    #[test]
    fn linear_schedule() {
        let b = SobolevBudget::f_alpha(1.5, 2.0, 3.0, 0.0).unwrap();
        let s = integrate_schedule(&b, 5.0).unwrap();
        assert!((s.q_at(5.0) - 2.0 / 3.0 * 5.0).abs() < 1e-9);
    }

    #[test]
    fn converse_examples() {
        assert_eq!(converse_fsobolev(2.0, 1.0, 0.0, 0.0).unwrap(), (2.0, 0.0));
        assert_eq!(converse_fsobolev(2.0, 2.0, 0.0, 1.0).unwrap(), (1.0, 1.0));
        assert!(converse_fsobolev(2.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn round_trip() {
        let p = 1.7;
        let b = SobolevBudget::constant(2.5, 0.0, p, k_ceiling(p), 1.0, 0.0).unwrap();
        let s = integrate_schedule(&b, 1.0).unwrap();
        let (qr, r0, rr) = s.rates_at_zero();
        let (c, ct) = converse_fsobolev(p, qr, r0, rr).unwrap();
        assert!((c - 2.5).abs() < 1e-12 && ct == 0.0);
    }

    #[test]
    fn tighten_examples() {
        assert_eq!(tighten(1.0, 1.0, 1.0, TightenMode::Cutoff { rho: 1.0 }).unwrap().value, 8.0);
        assert_eq!(tighten(1.0, 0.0, 1.0, TightenMode::Rothaus { c_rot: Some(2.0) }).unwrap().value, 3.0);
        assert_eq!(
            tighten(1.0, 0.0, 1.0, TightenMode::Rothaus { c_rot: None }).unwrap_err(),
            Error::MissingRothausConstant
        );
        let far = tighten(1.0, 0.0, 1.0, TightenMode::Cutoff { rho: 1e9 }).unwrap().value;
        assert!((far - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spectral_examples() {
        assert!((spectral_from_fsobolev(&FGrowth::Log).unwrap() - 0.5).abs() < 1e-15);
        assert!((spectral_from_fsobolev(&FGrowth::Linear).unwrap() - 0.25).abs() < 1e-15);
        for a in [1.1, 1.5, 1.9] {
            assert!(spectral_from_fsobolev(&FGrowth::f_alpha(a).unwrap()).unwrap() > 0.0);
        }
        let neg = FGrowth::Power { p: -2.0, coeff: -1.0 };
        assert!(matches!(spectral_from_fsobolev(&neg), Err(Error::NonpositiveCurvature(_))));
    }

    #[test]
    fn ceiling_enforced() {
        assert!(SobolevBudget::constant(1.0, 0.0, 2.0, 7.0 / 3.0, 1.0, 1.0).is_err());
    }
}
