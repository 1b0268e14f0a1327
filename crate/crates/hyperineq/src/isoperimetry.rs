//! Isoperimetric profiles on the line and dimension-free lower bounds for
//! products of `nu_alpha`.

use crate::error::{Error, Result};
use crate::fgrowth::{beta_of, FGrowth};
use crate::hardy_criteria::{poincare_b, rosen_d};
use crate::line_measure::{LineMeasure, Potential};
use crate::quad;
use serde::{Deserialize, Serialize};

/// `(1 - e^{-1}) / sqrt 2`.
pub fn cheeger_factor() -> f64 {
    -(-1f64).exp_m1() / std::f64::consts::SQRT_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSource {
    BobkovExact,
    LowerBoundAssembled,
}

/// An isoperimetric profile `t -> I(t)` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct IsoProfile {
    pub source: ProfileSource,
    pub measure: String,
    kind: ProfileKind,
}

#[derive(Debug, Clone)]
enum ProfileKind {
    Exact(Box<LineMeasure>),
    Assembled { k: f64, alpha: f64 },
}

impl IsoProfile {
    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0 && t < 1.0) {
            return 0.0;
        }
        match &self.kind {
            ProfileKind::Exact(m) => match m.quantile(t) {
                Ok(x) => m.density(x),
                Err(_) => 0.0,
            },
            ProfileKind::Assembled { k, alpha } => k * l_alpha(*alpha, t),
        }
    }

    /// Largest `|I(t) - I(1-t)|` on a grid.
    pub fn asymmetry(&self, n: usize) -> f64 {
        quad::linspace(0.0, 1.0, n).iter().map(|&t| (self.eval(t) - self.eval(1.0 - t)).abs()).fold(0.0, f64::max)
    }
}

/// Exact profile `I(t) = rho(F^{-1}(t))` of a symmetric log-concave measure.
pub fn bobkov_profile(m: &LineMeasure) -> Result<IsoProfile> {
    let (lo, hi) = m.window();
    let xs = quad::linspace(lo, hi, 4001);
    let h = xs[1] - xs[0];
    for i in 1..xs.len() - 1 {
        let d2 = (m.exponent(xs[i + 1]) - 2.0 * m.exponent(xs[i]) + m.exponent(xs[i - 1])) / (h * h);
        if d2 < -1e-8 * (1.0 + m.exponent(xs[i]).abs()) {
            return Err(Error::NotLogConcave(format!("log-density is convex near x={}", xs[i])));
        }
    }
    let med = m.median();
    for &x in xs.iter().step_by(97) {
        let (a, b) = (m.log_density(med + (x - med)), m.log_density(med - (x - med)));
        if a.is_finite() && b.is_finite() && (a - b).abs() > 1e-8 * (1.0 + a.abs()) {
            return Err(Error::HypothesisViolation(format!("measure is not symmetric about its median at {x}")));
        }
    }
    Ok(IsoProfile {
        source: ProfileSource::BobkovExact,
        measure: m.potential().tag().to_string(),
        kind: ProfileKind::Exact(Box::new(m.clone())),
    })
}

/// `nu_alpha = e^{-2 u_alpha}/Z` on the line, `alpha in [1, 2]`.
pub fn nu_alpha(alpha: f64) -> Result<LineMeasure> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(Error::DomainError(format!("alpha must lie in [1,2], got {alpha}")));
    }
    LineMeasure::new(Potential::u_alpha_closed(alpha), 2.0)
}

/// `m_alpha = e^{-|x|^alpha}/Z`.
pub fn m_alpha(alpha: f64) -> Result<LineMeasure> {
    LineMeasure::new(Potential::abs_power(alpha, 1.0)?, 1.0)
}

/// `L_alpha(t) = min(t,1-t) log^{1-1/alpha}(1/min(t,1-t))`.
pub fn l_alpha(alpha: f64, t: f64) -> f64 {
    let m = t.min(1.0 - t);
    if m <= 0.0 {
        return 0.0;
    }
    let e = 1.0 - 1.0 / alpha;
    if e == 0.0 {
        m
    } else {
        m * (1.0 / m).ln().powf(e)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileBand {
    pub k1: f64,
    pub k2: f64,
    /// `(alpha, family, inf I/L, sup I/L)`.
    pub per_measure: Vec<(f64, String, f64, f64)>,
}

/// Empirical `inf` and `sup` of `I/L_alpha` over `t in [1e-6, 1/2]` for `m_alpha` and `nu_alpha`.
pub fn profile_band(alphas: &[f64]) -> Result<ProfileBand> {
    let ts = quad::logspace(1e-6, 0.5, 200);
    let mut per = Vec::new();
    for &a in alphas {
        for (name, m) in [("m_alpha", m_alpha(a)?), ("nu_alpha", nu_alpha(a)?)] {
            let p = bobkov_profile(&m)?;
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for &t in &ts {
                let r = p.eval(t) / l_alpha(a, t);
                lo = lo.min(r);
                hi = hi.max(r);
            }
            per.push((a, name.to_string(), lo, hi));
        }
    }
    let k1 = per.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let k2 = per.iter().map(|r| r.3).fold(0.0, f64::max);
    Ok(ProfileBand { k1, k2, per_measure: per })
}

/// Hypotheses `N_{tau_{kt}}(P_t f) <= C ||f||_2` on `[0, T]` with
/// `tau_q(x) = x^2 exp(q F(x^2))`, `F(x) <= c1 log x`, `F(x^2) <= c2 F(x)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperboundCertificate {
    pub c: f64,
    pub k: f64,
    pub horizon: f64,
    pub growth: FGrowth,
    pub c1: f64,
    pub c2: f64,
}

impl HyperboundCertificate {
    pub fn new(c: f64, k: f64, horizon: f64, growth: FGrowth, c1: f64, c2: f64) -> Result<Self> {
        if !(c >= 1.0) || !(k > 0.0) || !(horizon > 0.0) || !(c1 > 0.0) || !(c2 > 0.0) {
            return Err(Error::InvalidInput(format!(
                "need C >= 1 and positive k, T, c1, c2; got C={c}, k={k}, T={horizon}, c1={c1}, c2={c2}"
            )));
        }
        Ok(HyperboundCertificate { c, k, horizon, growth, c1, c2 })
    }

    /// Certificate for `F_alpha` from an F-Sobolev constant `C_F` (no defect):
    /// `q(t) = k_eff t / C_F`, `C = e^{q(T)/2}`, `T = C_F / k_eff` so that `kT = 1 = 1/c1`.
    pub fn from_fsobolev(alpha: f64, c_f: f64) -> Result<Self> {
        let growth = FGrowth::f_alpha(alpha)?;
        let k_eff = (5.0 - 4.0 / alpha).min(2.0);
        let k = k_eff / c_f;
        let horizon = 1.0 / k;
        Self::new((0.5 * k * horizon).exp(), k, horizon, growth, 1.0, 8.0)
    }

    /// `c2 log(2 C^2) / min(k T, 1/c1)`.
    pub fn threshold(&self) -> f64 {
        self.c2 * (2.0 * self.c * self.c).ln() / (self.k * self.horizon).min(1.0 / self.c1)
    }

    /// `(1/4) sqrt(k / (c2 log(2 C^2)))`.
    pub fn prefactor(&self) -> f64 {
        0.25 * (self.k / (self.c2 * (2.0 * self.c * self.c).ln())).sqrt()
    }
}

/// Boundary-measure lower bound for a set of measure `a`; `None` when neither
/// `a` nor `1 - a` is small enough.
pub fn isop_from_hyperbound(cert: &HyperboundCertificate, a: f64) -> Option<f64> {
    if !(a > 0.0 && a < 1.0) {
        return None;
    }
    let thr = cert.threshold();
    [a, 1.0 - a]
        .into_iter()
        .filter_map(|s| {
            let f = cert.growth.eval(1.0 / s);
            (f >= thr).then(|| cert.prefactor() * s * f.sqrt())
        })
        .reduce(f64::max)
}

/// `((1 - e^{-1})/sqrt 2) sqrt(1/C_P) t (1 - t)`.
pub fn cheeger_lower(c_p: f64, t: f64) -> f64 {
    cheeger_factor() * (1.0 / c_p).sqrt() * t * (1.0 - t)
}

/// Every intermediate of the dimension-free constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionFreeReport {
    pub alpha: f64,
    pub beta: f64,
    pub c_p: f64,
    pub certificate: Option<HyperboundCertificate>,
    /// Small-set constant `(1/4) sqrt(k/(c2 log 2C^2))`.
    pub k1: f64,
    /// Square root of the smallness threshold.
    pub k2: f64,
    /// Cheeger constant against `min(t, 1-t)`.
    pub k3: f64,
    pub k4: f64,
    /// `I >= K L_alpha` in every dimension.
    pub k: f64,
}

/// Combines the small-set bound with Cheeger's inequality into `I >= K L_alpha`.
///
/// `K1` extends to all `t` as `K4 = min(K1, K3/K2)`; adding
/// `I/K3 >= log^{beta/2}(2) min(t,1-t)` to
/// `I/K4 >= min(t,1-t)[log^{beta/2}(1 + 1/min) - log^{beta/2} 2]`
/// gives `K = K3 K4 / (K3 + K4)`. At `beta = 0` the Cheeger bound alone gives `K = K3`.
pub fn assemble_dimension_free(alpha: f64, cert: Option<&HyperboundCertificate>, c_p: f64) -> Result<DimensionFreeReport> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(Error::DomainError(format!("alpha must lie in [1,2], got {alpha}")));
    }
    if !(c_p > 0.0 && c_p.is_finite()) {
        return Err(Error::InvalidInput(format!("C_P must be positive and finite, got {c_p}")));
    }
    let beta = beta_of(alpha);
    let k3 = cheeger_factor() * (1.0 / c_p).sqrt() / 2.0;
    if beta == 0.0 {
        return Ok(DimensionFreeReport { alpha, beta, c_p, certificate: cert.cloned(), k1: 0.0, k2: 0.0, k3, k4: 0.0, k: k3 });
    }
    let cert = cert.ok_or_else(|| Error::InvalidInput("alpha > 1 needs a hyperboundedness certificate".into()))?;
    let k1 = cert.prefactor();
    let k2 = cert.threshold().sqrt();
    let k4 = k1.min(k3 / k2);
    Ok(DimensionFreeReport {
        alpha,
        beta,
        c_p,
        certificate: Some(cert.clone()),
        k1,
        k2,
        k3,
        k4,
        k: k3 * k4 / (k3 + k4),
    })
}

/// Full pipeline for `nu_alpha`: `C_P <= 4B`, `C_F = 168 D`, certificate, assembly.
pub fn dimension_free_for_nu_alpha(alpha: f64) -> Result<DimensionFreeReport> {
    let m = nu_alpha(alpha)?;
    let c_p = 4.0 * poincare_b(&m)?.constant;
    let beta = beta_of(alpha);
    if beta == 0.0 {
        return assemble_dimension_free(alpha, None, c_p);
    }
    let r = rosen_d(&m, beta)?;
    let cert = HyperboundCertificate::from_fsobolev(alpha, r.extras["K_times_D"])?;
    assemble_dimension_free(alpha, Some(&cert), c_p)
}

/// CSV rows `t, I(t), L_alpha(t), K L_alpha(t)` for `nu_alpha`.
pub fn profile_csv(alpha: f64, k: f64, n: usize) -> Result<String> {
    let p = bobkov_profile(&nu_alpha(alpha)?)?;
    let mut s = String::from("t,profile,l_alpha,assembled\n");
    for t in quad::linspace(0.0, 1.0, n) {
        let l = l_alpha(alpha, t);
        s.push_str(&format!("{t},{},{l},{}\n", p.eval(t), k * l));
    }
    Ok(s)
}

/// The assembled bound as a profile.
pub fn assembled_profile(report: &DimensionFreeReport) -> IsoProfile {
    IsoProfile {
        source: ProfileSource::LowerBoundAssembled,
        measure: format!("nu_alpha(alpha={})^n", report.alpha),
        kind: ProfileKind::Assembled { k: report.k, alpha: report.alpha },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_profile() {
        let p = bobkov_profile(&m_alpha(1.0).unwrap()).unwrap();
        for t in [1e-4, 0.1, 0.3, 0.5, 0.8] {
            assert!((p.eval(t) - t.min(1.0 - t)).abs() < 1e-7, "{t}");
        }
        assert!(p.asymmetry(101) < 1e-8);
    }

    #[test]
    fn gaussian_profile_at_half() {
        let m = LineMeasure::new(Potential::abs_power(2.0, 0.5).unwrap(), 1.0).unwrap();
        let p = bobkov_profile(&m).unwrap();
        assert!((p.eval(0.5) - 0.398942).abs() < 1e-6);
    }

    #[test]
    fn rejects_non_log_concave() {
        let m = LineMeasure::new(Potential::abs_power(0.5, 1.0).unwrap(), 1.0).unwrap();
        assert!(matches!(bobkov_profile(&m), Err(Error::NotLogConcave(_))));
    }

    #[test]
    fn small_set_arithmetic() {
        let cert = HyperboundCertificate::new(1.0, 1.0, 1.0, FGrowth::f_alpha(1.5).unwrap(), 1.0, 8.0).unwrap();
        let want = 0.25 * (1.0 / (8.0 * 2f64.ln())).sqrt();
        assert!((cert.prefactor() - want).abs() < 1e-15);
        assert!((want - 0.106165).abs() < 1e-6);
        assert!(isop_from_hyperbound(&cert, 0.4).is_none());
    }

    #[test]
    fn cheeger_value() {
        assert!((cheeger_lower(1.0, 0.5) - 0.111_744_183_4).abs() < 1e-10);
        for t in quad::linspace(0.0, 1.0, 101) {
            assert!(cheeger_lower(4.0, t) <= t.min(1.0 - t) + 1e-15);
        }
    }

    #[test]
    fn alpha_one_is_cheeger() {
        let r = assemble_dimension_free(1.0, None, 4.0).unwrap();
        assert_eq!(r.k, r.k3);
    }

    #[test]
    fn k_decreases_with_c() {
        let mut last = f64::INFINITY;
        for c in [1.0, 1.5, 3.0, 10.0] {
            let cert = HyperboundCertificate::new(c, 0.01, 100.0, FGrowth::f_alpha(1.5).unwrap(), 1.0, 8.0).unwrap();
            let k = assemble_dimension_free(1.5, Some(&cert), 2.0).unwrap().k;
            assert!(k <= last);
            last = k;
        }
    }
}
