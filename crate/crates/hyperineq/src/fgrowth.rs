//! Growth functions `F` used in F-Sobolev inequalities, with their certificates.

use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::quad::{self, gl64};
use serde::{Deserialize, Serialize};

/// A growth function on `(0, inf)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FGrowth {
    /// `log x`.
    Log,
    /// `x - 1`.
    Linear,
    /// `coeff * x^p`.
    Power { p: f64, coeff: f64 },
    /// `max(log(x / shift), 0)`.
    LogPlus { shift: f64 },
    /// `log(1 + x)^beta`.
    LogBeta { beta: f64 },
    /// `log(1 + x)^beta - log(2)^beta` with `beta = 2(1 - 1/alpha)`.
    FAlpha { alpha: f64 },
    /// `0` on `[0, 2 rho]`, `log(x)^beta - log(2 rho)^beta` beyond.
    FAlphaTilde { alpha: f64, rho: f64 },
    /// Indicator of `[threshold, inf)`.
    Indicator { threshold: f64 },
    /// Convolution of `base` with the bump `g_eps` supported on `[-eps, 0]`.
    Mollified { base: Box<FGrowth>, eps: f64 },
    /// Tabulated values, PCHIP-interpolated.
    Table(Pchip),
}

/// `beta(alpha) = 2(1 - 1/alpha)`.
pub fn beta_of(alpha: f64) -> f64 {
    2.0 * (1.0 - 1.0 / alpha)
}

/// Normalizing constant of the bump `(1 - (2t+1)^2)^4` on `[-1, 0]`.
pub const BUMP_NORMALIZER: f64 = 315.0 / 128.0;

/// The bump density on `[-1, 0]`.
pub fn bump(t: f64) -> f64 {
    if !(-1.0..=0.0).contains(&t) {
        return 0.0;
    }
    let s = 2.0 * t + 1.0;
    BUMP_NORMALIZER * (1.0 - s * s).powi(4)
}

fn powb(l: f64, e: f64) -> f64 {
    if l == 0.0 {
        if e > 0.0 {
            0.0
        } else if e == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        l.powf(e)
    }
}

impl FGrowth {
    pub fn f_alpha(alpha: f64) -> Result<Self> {
        if !(1.0..=2.0).contains(&alpha) {
            return Err(Error::DomainError(format!("F_alpha needs alpha in [1,2], got {alpha}")));
        }
        Ok(FGrowth::FAlpha { alpha })
    }

    pub fn f_alpha_tilde(alpha: f64, rho: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::DomainError(format!("tilde F_alpha needs alpha in (1,2), got {alpha}")));
        }
        if !(2.0 * rho > 1.0) {
            return Err(Error::DomainError(format!("tilde F_alpha needs 2 rho > 1, got rho={rho}")));
        }
        Ok(FGrowth::FAlphaTilde { alpha, rho })
    }

    pub fn table(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Ok(FGrowth::Table(Pchip::new(xs, ys)?))
    }

    pub fn tag(&self) -> String {
        match self {
            FGrowth::Log => "log".into(),
            FGrowth::Linear => "x-1".into(),
            FGrowth::Power { p, coeff } => format!("{coeff}*x^{p}"),
            FGrowth::LogPlus { shift } => format!("log_+(x/{shift})"),
            FGrowth::LogBeta { beta } => format!("log(1+x)^{beta}"),
            FGrowth::FAlpha { alpha } => format!("F_alpha(alpha={alpha})"),
            FGrowth::FAlphaTilde { alpha, rho } => format!("tildeF_alpha(alpha={alpha},rho={rho})"),
            FGrowth::Indicator { threshold } => format!("1[x>={threshold}]"),
            FGrowth::Mollified { base, eps } => format!("mollified({},eps={eps})", base.tag()),
            FGrowth::Table(_) => "table".into(),
        }
    }

    /// Point where the first derivative jumps, with the size of the jump.
    pub fn seam(&self) -> Option<(f64, f64)> {
        match *self {
            FGrowth::FAlphaTilde { alpha, rho } => {
                let b = beta_of(alpha);
                let s = 2.0 * rho;
                Some((s, b * s.ln().powf(b - 1.0) / s))
            }
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FGrowth::Log => x.ln(),
            FGrowth::Linear => x - 1.0,
            FGrowth::Power { p, coeff } => coeff * x.powf(*p),
            FGrowth::LogPlus { shift } => (x / shift).ln().max(0.0),
            FGrowth::LogBeta { beta } => powb(x.ln_1p(), *beta),
            FGrowth::FAlpha { alpha } => {
                let b = beta_of(*alpha);
                powb(x.ln_1p(), b) - 2f64.ln().powf(b)
            }
            FGrowth::FAlphaTilde { alpha, rho } => {
                let b = beta_of(*alpha);
                if x <= 2.0 * rho {
                    0.0
                } else {
                    x.ln().powf(b) - (2.0 * rho).ln().powf(b)
                }
            }
            FGrowth::Indicator { threshold } => {
                if x >= *threshold {
                    1.0
                } else {
                    0.0
                }
            }
            FGrowth::Mollified { base, eps } => mollified(base, *eps, x, |f, z| f.eval(z), false),
            FGrowth::Table(p) => p.eval(x),
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match self {
            FGrowth::Log => 1.0 / x,
            FGrowth::Linear => 1.0,
            FGrowth::Power { p, coeff } => coeff * p * x.powf(p - 1.0),
            FGrowth::LogPlus { shift } => {
                if x > *shift {
                    1.0 / x
                } else {
                    0.0
                }
            }
            FGrowth::LogBeta { beta } => beta * powb(x.ln_1p(), beta - 1.0) / (1.0 + x),
            FGrowth::FAlpha { alpha } => {
                let b = beta_of(*alpha);
                b * powb(x.ln_1p(), b - 1.0) / (1.0 + x)
            }
            FGrowth::FAlphaTilde { alpha, rho } => {
                let b = beta_of(*alpha);
                if x <= 2.0 * rho {
                    0.0
                } else {
                    b * x.ln().powf(b - 1.0) / x
                }
            }
            FGrowth::Indicator { .. } => 0.0,
            FGrowth::Mollified { base, eps } => mollified(base, *eps, x, |f, z| f.d1(z), false),
            FGrowth::Table(p) => p.derivative(x),
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match self {
            FGrowth::Log => -1.0 / (x * x),
            FGrowth::Linear => 0.0,
            FGrowth::Power { p, coeff } => coeff * p * (p - 1.0) * x.powf(p - 2.0),
            FGrowth::LogPlus { shift } => {
                if x > *shift {
                    -1.0 / (x * x)
                } else {
                    0.0
                }
            }
            FGrowth::LogBeta { beta } => {
                let l = x.ln_1p();
                beta * ((beta - 1.0) * powb(l, beta - 2.0) - powb(l, beta - 1.0)) / ((1.0 + x) * (1.0 + x))
            }
            FGrowth::FAlpha { alpha } => {
                let b = beta_of(*alpha);
                let l = x.ln_1p();
                b * ((b - 1.0) * powb(l, b - 2.0) - powb(l, b - 1.0)) / ((1.0 + x) * (1.0 + x))
            }
            FGrowth::FAlphaTilde { alpha, rho } => {
                let b = beta_of(*alpha);
                if x <= 2.0 * rho {
                    0.0
                } else {
                    let l = x.ln();
                    b * ((b - 1.0) * l.powf(b - 2.0) - l.powf(b - 1.0)) / (x * x)
                }
            }
            FGrowth::Indicator { .. } => 0.0,
            FGrowth::Mollified { base, eps } => mollified(base, *eps, x, |f, z| f.d2(z), true),
            FGrowth::Table(p) => p.second_derivative(x),
        }
    }
}

/// `int F(z) g_eps(x - z) dz` over `z in [x, x+eps]`, split at the seam of `F`.
///
/// With `add_jump` the seam's derivative jump contributes `J * g_eps(x - s)`,
/// which is the distributional part of the second derivative.
fn mollified<E: Fn(&FGrowth, f64) -> f64>(base: &FGrowth, eps: f64, x: f64, ev: E, add_jump: bool) -> f64 {
    let kernel = |z: f64| bump((x - z) / eps) / eps;
    let piece = |a: f64, b: f64| gl64(|z| ev(base, z) * kernel(z), a, b);
    let (lo, hi) = (x, x + eps);
    match base.seam() {
        Some((s, jump)) if s > lo && s < hi => {
            let mut v = piece(lo, s) + piece(s, hi);
            if add_jump {
                v += jump * kernel(s);
            }
            v
        }
        Some((s, _)) if s >= hi => 0.0,
        _ => piece(lo, hi),
    }
}

/// Builds `F * g_eps` for the seam-bearing `tilde F_alpha`.
pub fn mollify(base: &FGrowth, eps: f64) -> Result<FGrowth> {
    if !(eps > 0.0) {
        return Err(Error::DomainError(format!("eps must be positive, got {eps}")));
    }
    if let Some((s, _)) = base.seam() {
        if eps >= s {
            return Err(Error::DomainError(format!("eps={eps} must be below the seam {s}")));
        }
    }
    Ok(FGrowth::Mollified { base: Box::new(base.clone()), eps })
}

/// Slope of `tilde F_alpha` just right of its seam.
pub fn tilde_seam_slope(alpha: f64, rho: f64) -> f64 {
    (alpha - 1.0) / (alpha * rho) * (2.0 * rho).ln().powf((alpha - 2.0) / alpha)
}

/// The constant `lambda = 1 + (2 - alpha)/(alpha log(2 rho))` for which
/// `x F'' + lambda F' >= 0` holds for the mollified `tilde F_alpha`.
pub fn mollified_lambda(alpha: f64, rho: f64) -> f64 {
    1.0 + (2.0 - alpha) / (alpha * (2.0 * rho).ln())
}

/// Result of a grid check of a differential growth condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FcondCertificate {
    pub growth: String,
    pub p: f64,
    pub k: f64,
    /// `4(p-1)/p`, the largest exponent compatible with a quadratic start.
    pub k_ceiling: f64,
    pub k_within_ceiling: bool,
    pub coefficient: f64,
    pub worst_margin: f64,
    pub worst_x: f64,
    pub points: usize,
    pub pass: bool,
}

/// Default abscissae for growth checks: 2000 log-spaced points in `[1e-6, 1e12]`.
pub fn default_grid() -> Vec<f64> {
    quad::logspace(1e-6, 1e12, 2000)
}

fn differential_check(f: &FGrowth, coef: f64, grid: &[f64]) -> (f64, f64, bool) {
    let mut worst = f64::INFINITY;
    let mut worst_x = f64::NAN;
    let mut ok = true;
    for &x in grid {
        let a = x * f.d2(x);
        let b = coef * f.d1(x);
        if !a.is_finite() || !b.is_finite() {
            continue;
        }
        let m = a + b;
        let scale = a.abs() + b.abs();
        let rel = if scale > 0.0 { m / scale } else { 0.0 };
        if rel < worst {
            worst = rel;
            worst_x = x;
        }
        if rel < -1e-9 {
            ok = false;
        }
    }
    (worst, worst_x, ok)
}

/// Checks `x F'' + (2 + 1/p - k/2) F' >= 0` on a log grid.
///
/// The margin is reported relative to `|x F''| + |coef F'|`. The ceiling flag
/// records whether `k <= 4(p-1)/p`; it does not affect `pass`.
pub fn check_fcond(f: &FGrowth, p: f64, k: f64, grid: &[f64]) -> Result<FcondCertificate> {
    if !(p > 1.0) {
        return Err(Error::DomainError(format!("p must exceed 1, got {p}")));
    }
    let coef = 2.0 + 1.0 / p - 0.5 * k;
    let (worst, worst_x, ok) = differential_check(f, coef, grid);
    let ceiling = 4.0 * (p - 1.0) / p;
    let cert = FcondCertificate {
        growth: f.tag(),
        p,
        k,
        k_ceiling: ceiling,
        k_within_ceiling: k <= ceiling + 1e-12,
        coefficient: coef,
        worst_margin: worst,
        worst_x,
        points: grid.len(),
        pass: ok,
    };
    if !ok {
        return Err(Error::ConditionViolated(format!(
            "x F'' + {coef} F' < 0 for {} at x={worst_x} (relative margin {worst})",
            f.tag()
        )));
    }
    Ok(cert)
}

/// Worst relative margin of `x F'' + lambda F' >= 0` on the grid, and whether it holds.
pub fn check_lambda_condition(f: &FGrowth, lambda: f64, grid: &[f64]) -> (f64, f64, bool) {
    differential_check(f, lambda, grid)
}

/// The elementary inequalities relating `F_alpha` to `log`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct C1C2Report {
    pub beta: f64,
    /// `min over x of log x - (log^beta(1+x) - log^beta 2)`.
    pub c1_worst_margin: f64,
    pub c1_pass: bool,
    /// `max over x of (log^beta(1+x^2) - log^beta 2) / (log^beta(1+x) - log^beta 2)`.
    pub c2_worst_ratio: f64,
    pub c2_pass: bool,
    pub points: usize,
}

/// Verifies `F(x) <= log x` and `F(x^2) <= 8 F(x)` for `F = log^beta(1+.) - log^beta 2` on `[1, 1e9]`.
pub fn check_c1c2_beta(beta: f64) -> Result<C1C2Report> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::DomainError(format!("beta must lie in [0,1], got {beta}")));
    }
    let l2b = 2f64.ln().powf(beta);
    let f = |x: f64| powb(x.ln_1p(), beta) - l2b;
    let grid = quad::logspace(1.0, 1e9, 2001);
    let mut c1 = f64::INFINITY;
    let mut c2: f64 = 0.0;
    for &x in &grid {
        c1 = c1.min(x.ln() - f(x));
        let den = f(x);
        let num = powb((x * x).ln_1p(), beta) - l2b;
        let ratio = if den > 1e-300 {
            num / den
        } else if beta > 0.0 {
            2.0
        } else {
            0.0
        };
        c2 = c2.max(ratio);
    }
    Ok(C1C2Report {
        beta,
        c1_worst_margin: c1,
        c1_pass: c1 >= -1e-12,
        c2_worst_ratio: c2,
        c2_pass: c2 <= 8.0 + 1e-12,
        points: grid.len(),
    })
}

pub fn check_c1c2(alpha: f64) -> Result<C1C2Report> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(Error::DomainError(format!("alpha must lie in [1,2], got {alpha}")));
    }
    check_c1c2_beta(beta_of(alpha))
}

/// Smallest `lambda >= 4` on a geometric grid with `F(lambda x) <= lambda F(x) / 4` for `x >= 2`,
/// after checking that `F(x)/x` is non-increasing on `[2, inf)`.
pub fn find_lambda(f: &FGrowth) -> Result<f64> {
    let xs = quad::logspace(2.0, 1e12, 600);
    for w in xs.windows(2) {
        if f.eval(w[1]) / w[1] > f.eval(w[0]) / w[0] * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::HypothesisViolation(format!("{}: F(x)/x increases near x={}", f.tag(), w[0])));
        }
        if f.eval(w[0]) < 0.0 {
            return Err(Error::HypothesisViolation(format!("{} is negative at {}", f.tag(), w[0])));
        }
    }
    let mut lambda = 4.0;
    while lambda < 1e9 {
        if xs.iter().all(|&x| f.eval(lambda * x) <= lambda * f.eval(x) / 4.0 * (1.0 + 1e-12)) {
            return Ok(lambda);
        }
        lambda *= 1.02;
    }
    Err(Error::HypothesisViolation(format!("no lambda below 1e9 for {}", f.tag())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_is_normalized() {
        let m = quad::adaptive(bump, -1.0, 0.0, 1e-15, 1e-14).unwrap();
        assert!((m - 1.0).abs() < 1e-13);
    }

    #[test]
    fn f_alpha_derivative_at_one() {
        let f = FGrowth::f_alpha(1.5).unwrap();
        let b = beta_of(1.5);
        assert!((f.d1(1.0) - b * 2f64.ln().powf(b - 1.0) / 2.0).abs() < 1e-15);
        assert!(f.eval(1.0).abs() < 1e-15);
        let h = 1e-5;
        let fd = (f.d1(1.0 + h) - f.d1(1.0 - h)) / (2.0 * h);
        assert!((fd - f.d2(1.0)).abs() < 1e-8);
    }

    #[test]
    fn fcond_examples() {
        let g = default_grid();
        assert!(check_fcond(&FGrowth::Log, 2.0, 2.0, &g).unwrap().pass);
        assert!(check_fcond(&FGrowth::Power { p: 2.0, coeff: 1.0 }, 2.0, 2.0, &g).unwrap().pass);
        for a in [1.25, 1.5, 1.75] {
            let c = check_fcond(&FGrowth::f_alpha(a).unwrap(), 2.0, 5.0 - 4.0 / a, &g).unwrap();
            assert!(c.pass);
            assert_eq!(c.k_within_ceiling, a <= 4.0 / 3.0);
        }
        let bad = check_fcond(&FGrowth::Power { p: 1.0, coeff: -1.0 }, 2.0, 2.0, &g);
        assert!(matches!(bad, Err(Error::ConditionViolated(_))));
    }

    #[test]
    fn mollified_vanishes_below_seam() {
        let (a, rho, eps) = (1.5, 4.0, 0.1);
        let ft = FGrowth::f_alpha_tilde(a, rho).unwrap();
        let m = mollify(&ft, eps).unwrap();
        for x in quad::linspace(0.0, 2.0 * rho - eps, 50) {
            assert_eq!(m.eval(x), 0.0);
        }
        let slope = tilde_seam_slope(a, rho);
        assert!((ft.seam().unwrap().1 - slope).abs() < 1e-14);
        for x in quad::linspace(2.0 * rho, 40.0, 200) {
            assert!(m.eval(x) <= ft.eval(x) + eps * slope + 1e-12);
        }
    }

    #[test]
    fn mollified_lambda_condition() {
        let (a, rho) = (1.5, 4.0);
        let m = mollify(&FGrowth::f_alpha_tilde(a, rho).unwrap(), 0.05).unwrap();
        let grid = quad::linspace(2.0 * rho - 0.0499, 60.0, 3000);
        let (_, _, ok) = check_lambda_condition(&m, mollified_lambda(a, rho), &grid);
        assert!(ok);
    }

    #[test]
    fn mollified_derivative_matches_difference_quotient() {
        let m = mollify(&FGrowth::f_alpha_tilde(1.5, 4.0).unwrap(), 0.2).unwrap();
        for x in [7.85, 7.9, 8.5] {
            let h = 1e-5;
            let fd = (m.eval(x + h) - m.eval(x - h)) / (2.0 * h);
            assert!((fd - m.d1(x)).abs() < 1e-7, "x={x}");
            let fd2 = (m.d1(x + h) - m.d1(x - h)) / (2.0 * h);
            assert!((fd2 - m.d2(x)).abs() < 1e-5 * (1.0 + fd2.abs()), "x={x} {fd2} {}", m.d2(x));
        }
    }

    #[test]
    fn c1c2_certificates() {
        for beta in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let r = check_c1c2_beta(beta).unwrap();
            assert!(r.c1_pass && r.c2_pass, "{r:?}");
        }
    }

    #[test]
    fn lambda_search() {
        assert_eq!(find_lambda(&FGrowth::Indicator { threshold: 2.0 }).unwrap(), 4.0);
        let l = find_lambda(&FGrowth::LogBeta { beta: 1.0 }).unwrap();
        assert!(l > 4.0 && l < 40.0);
    }
}
