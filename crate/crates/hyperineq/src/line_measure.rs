//! Probability measures `e^{-scale*V(x)} dx / Z` on the real line.
//!
//! All cumulative quantities are stored in log space so that tails far below
//! the double-precision range stay usable. The support is covered by cells on
//! which the exponent varies by at most [`MAX_CELL_SWING`]; each cell is
//! integrated with 10-point Gauss-Legendre relative to its endpoint value.

use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::quad::{self, gl10, log_add};
use std::fmt;
use std::sync::Arc;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Largest change of the exponent allowed inside one quadrature cell.
pub const MAX_CELL_SWING: f64 = 0.5;

/// A potential `V` on the real line.
#[derive(Clone)]
pub struct Potential {
    f: RealFn,
    d1: Option<RealFn>,
    d2: Option<RealFn>,
    symmetric: bool,
    growth_exponent: Option<f64>,
    breakpoints: Vec<f64>,
    tag: String,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("tag", &self.tag)
            .field("symmetric", &self.symmetric)
            .field("growth_exponent", &self.growth_exponent)
            .finish()
    }
}

impl Potential {
    /// A potential from a closure. Derivatives fall back to central differences.
    pub fn from_fn<F>(tag: &str, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Potential {
            f: Arc::new(f),
            d1: None,
            d2: None,
            symmetric: false,
            growth_exponent: None,
            breakpoints: Vec::new(),
            tag: tag.to_string(),
        }
    }

    pub fn with_derivatives<D1, D2>(mut self, d1: D1, d2: D2) -> Self
    where
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn symmetric(mut self, yes: bool) -> Self {
        self.symmetric = yes;
        self
    }

    pub fn with_breakpoints(mut self, b: Vec<f64>) -> Self {
        self.breakpoints = b;
        self
    }

    pub fn with_growth_exponent(mut self, p: f64) -> Self {
        self.growth_exponent = Some(p);
        self
    }

    /// `coeff * |x|^p`.
    pub fn abs_power(p: f64, coeff: f64) -> Result<Self> {
        if !(p > 0.0) || !(coeff > 0.0) {
            return Err(Error::DomainError(format!("abs_power needs p>0 and coeff>0, got p={p}, coeff={coeff}")));
        }
        Ok(Potential::from_fn(&format!("abs_power(p={p},c={coeff})"), move |x: f64| coeff * x.abs().powf(p))
            .with_derivatives(
                move |x: f64| {
                    if x == 0.0 {
                        if p > 1.0 {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    } else {
                        coeff * p * x.abs().powf(p - 1.0) * x.signum()
                    }
                },
                move |x: f64| {
                    if x == 0.0 && p < 2.0 {
                        f64::INFINITY
                    } else {
                        coeff * p * (p - 1.0) * x.abs().powf(p - 2.0)
                    }
                },
            )
            .symmetric(true)
            .with_breakpoints(vec![0.0])
            .with_growth_exponent(p))
    }

    /// The smoothed power `u_alpha`: `|x|^alpha` outside `[-1,1]`, an even quartic inside, C^2 at `|x| = 1`.
    pub fn u_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::DomainError(format!("u_alpha needs alpha in (1,2), got {alpha}")));
        }
        Ok(Self::u_alpha_closed(alpha))
    }

    /// `u_alpha` on the closed range `alpha in [1, 2]`.
    ///
    /// The endpoints are legitimate (`u_1` is convex, `u_2 = x^2`) and are used by the
    /// isoperimetric profile bands. Panics outside `[1, 2]`.
    pub fn u_alpha_closed(alpha: f64) -> Self {
        assert!((1.0..=2.0).contains(&alpha), "alpha={alpha} outside [1,2]");
        let a4 = alpha * (alpha - 2.0) / 8.0;
        let a2 = alpha * (4.0 - alpha) / 4.0;
        let a0 = 1.0 - 0.75 * alpha + alpha * alpha / 8.0;
        Potential::from_fn(&format!("u_alpha(alpha={alpha})"), move |x: f64| {
            let ax = x.abs();
            if ax > 1.0 {
                ax.powf(alpha)
            } else {
                let x2 = x * x;
                a4 * x2 * x2 + a2 * x2 + a0
            }
        })
        .with_derivatives(
            move |x: f64| {
                let ax = x.abs();
                if ax > 1.0 {
                    alpha * ax.powf(alpha - 1.0) * x.signum()
                } else {
                    4.0 * a4 * x * x * x + 2.0 * a2 * x
                }
            },
            move |x: f64| {
                let ax = x.abs();
                if ax > 1.0 {
                    alpha * (alpha - 1.0) * ax.powf(alpha - 2.0)
                } else {
                    12.0 * a4 * x * x + 2.0 * a2
                }
            },
        )
        .symmetric(true)
        .with_breakpoints(vec![-1.0, 0.0, 1.0])
        .with_growth_exponent(alpha)
    }

    /// Tabulated potential, interpolated by PCHIP and extrapolated linearly.
    pub fn table(xs: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        let p = Arc::new(Pchip::new(xs.clone(), vs)?);
        let (p0, p1, p2) = (p.clone(), p.clone(), p);
        Ok(Potential::from_fn("table", move |x| p0.eval(x))
            .with_derivatives(move |x| p1.derivative(x), move |x| p2.second_derivative(x))
            .with_breakpoints(xs))
    }

    /// Parses `x,V` rows. Blank lines, `#` comments and a non-numeric header are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 2 {
                return Err(Error::InvalidInput(format!("line {}: expected two columns", lineno + 1)));
            }
            match (cols[0].parse::<f64>(), cols[1].parse::<f64>()) {
                (Ok(x), Ok(v)) => {
                    xs.push(x);
                    vs.push(v);
                }
                _ if xs.is_empty() => continue,
                _ => return Err(Error::InvalidInput(format!("line {}: not numeric", lineno + 1))),
            }
        }
        Self::table(xs, vs)
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn growth_exponent(&self) -> Option<f64> {
        self.growth_exponent
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match &self.d1 {
            Some(d) => d(x),
            None => {
                let h = f64::EPSILON.cbrt() * x.abs().max(1.0);
                (self.evaluate(x + h) - self.evaluate(x - h)) / (2.0 * h)
            }
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match &self.d2 {
            Some(d) => d(x),
            None => {
                let h = f64::EPSILON.powf(0.25) * x.abs().max(1.0);
                (self.evaluate(x + h) - 2.0 * self.evaluate(x) + self.evaluate(x - h)) / (h * h)
            }
        }
    }

    /// Checks finiteness and, when flagged, evenness on a test grid.
    pub fn validate(&self) -> Result<()> {
        for k in -40..=40 {
            let x = k as f64 * 0.37;
            let v = self.evaluate(x);
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("potential {} is not finite at {x}", self.tag)));
            }
            if self.symmetric {
                let w = self.evaluate(-x);
                if (v - w).abs() > 1e-12 * (1.0 + v.abs()) {
                    return Err(Error::InvalidInput(format!("potential {} flagged symmetric but V({x}) != V(-{x})", self.tag)));
                }
            }
        }
        Ok(())
    }
}

/// Construction options for [`LineMeasure`].
#[derive(Debug, Clone, Copy)]
pub struct MeasureOptions {
    /// Requested accuracy of cumulative quantities.
    pub tol: f64,
    /// The grid ends where the exponent exceeds its minimum by this much.
    pub log_cut: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions { tol: 1e-8, log_cut: 300.0 }
    }
}

/// The probability measure `e^{-scale*V}/Z` with log-space cumulative tables.
#[derive(Clone)]
pub struct LineMeasure {
    potential: Potential,
    scale: f64,
    opts: MeasureOptions,
    nodes: Vec<f64>,
    log_left: Vec<f64>,
    log_right: Vec<f64>,
    log_z: f64,
    median: f64,
    median_idx: usize,
    log_j: Vec<f64>,
    w_min: f64,
}

impl fmt::Debug for LineMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LineMeasure")
            .field("potential", &self.potential.tag)
            .field("scale", &self.scale)
            .field("cells", &(self.nodes.len() - 1))
            .field("log_z", &self.log_z)
            .field("median", &self.median)
            .finish()
    }
}

impl LineMeasure {
    pub fn new(potential: Potential, scale: f64) -> Result<Self> {
        Self::with_options(potential, scale, MeasureOptions::default())
    }

    pub fn with_options(potential: Potential, scale: f64, opts: MeasureOptions) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::DomainError(format!("scale must be positive, got {scale}")));
        }
        potential.validate()?;
        let w = |x: f64| scale * potential.evaluate(x);
        let (center, w_min) = find_minimum(&w)?;
        let right = march(&w, center, 1.0, w_min, opts.log_cut, potential.breakpoints())?;
        let left = march(&w, center, -1.0, w_min, opts.log_cut, potential.breakpoints())?;
        let mut nodes: Vec<f64> = left.into_iter().rev().collect();
        nodes.pop();
        nodes.extend(right);
        let mut m = LineMeasure {
            potential,
            scale,
            opts,
            nodes,
            log_left: Vec::new(),
            log_right: Vec::new(),
            log_z: 0.0,
            median: 0.0,
            median_idx: 0,
            log_j: Vec::new(),
            w_min,
        };
        m.accumulate()?;
        let med = m.locate_quantile(0.5);
        m.insert_node(med);
        m.accumulate()?;
        m.median = med;
        m.median_idx = m.nodes.iter().position(|&x| x == med).expect("median node inserted");
        m.accumulate_inverse();
        Ok(m)
    }

    /// Exponent `scale * V(x)`.
    pub fn exponent(&self, x: f64) -> f64 {
        self.scale * self.potential.evaluate(x)
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn tol(&self) -> f64 {
        self.opts.tol
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    pub fn normalizer(&self) -> f64 {
        self.log_z.exp()
    }

    pub fn median(&self) -> f64 {
        self.median
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Ends of the quadrature grid.
    pub fn window(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().expect("nodes"))
    }

    pub fn min_exponent(&self) -> f64 {
        self.w_min
    }

    pub fn log_density(&self, x: f64) -> f64 {
        -self.exponent(x) - self.log_z
    }

    pub fn density(&self, x: f64) -> f64 {
        self.log_density(x).exp()
    }

    fn log_int_neg(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return f64::NEG_INFINITY;
        }
        let off = self.exponent(a).min(self.exponent(b));
        -off + gl10(|t| (off - self.exponent(t)).exp(), a, b).ln()
    }

    fn log_int_pos(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return f64::NEG_INFINITY;
        }
        let off = self.exponent(a).max(self.exponent(b));
        off + gl10(|t| (self.exponent(t) - off).exp(), a, b).ln()
    }

    fn log_tail_beyond(&self, x: f64, dir: f64) -> Result<f64> {
        let w0 = self.exponent(x);
        let n = self.nodes.len();
        let width = if dir > 0.0 {
            self.nodes[n - 1] - self.nodes[n - 2]
        } else {
            self.nodes[1] - self.nodes[0]
        };
        let v = quad::semi_infinite(|s| (w0 - self.exponent(x + dir * width * s)).exp(), 0.0, 1e-14, 1e-12)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonIntegrable(format!("tail integral beyond {x} is {v}")));
        }
        Ok(-w0 + (v * width).ln())
    }

    fn accumulate(&mut self) -> Result<()> {
        let n = self.nodes.len();
        let cells: Vec<f64> = (0..n - 1).map(|i| self.log_int_neg(self.nodes[i], self.nodes[i + 1])).collect();
        let tail_l = self.log_tail_beyond(self.nodes[0], -1.0)?;
        let tail_r = self.log_tail_beyond(self.nodes[n - 1], 1.0)?;
        let mut left = vec![tail_l; n];
        for i in 1..n {
            left[i] = log_add(left[i - 1], cells[i - 1]);
        }
        let mut right = vec![tail_r; n];
        for i in (0..n - 1).rev() {
            right[i] = log_add(right[i + 1], cells[i]);
        }
        self.log_z = log_add(left[0], right[0]);
        if !self.log_z.is_finite() {
            return Err(Error::NonIntegrable(format!("normalizer of {} is not finite", self.potential.tag)));
        }
        self.log_left = left;
        self.log_right = right;
        Ok(())
    }

    fn accumulate_inverse(&mut self) {
        let n = self.nodes.len();
        let im = self.median_idx;
        let mut j = vec![f64::NEG_INFINITY; n];
        for i in im..n - 1 {
            j[i + 1] = log_add(j[i], self.log_int_pos(self.nodes[i], self.nodes[i + 1]));
        }
        for i in (1..=im).rev() {
            j[i - 1] = log_add(j[i], self.log_int_pos(self.nodes[i - 1], self.nodes[i]));
        }
        self.log_j = j;
    }

    fn insert_node(&mut self, x: f64) {
        if let Err(i) = self.nodes.binary_search_by(|v| v.total_cmp(&x)) {
            self.nodes.insert(i, x);
        }
    }

    fn cell_of(&self, x: f64) -> Option<usize> {
        let n = self.nodes.len();
        if x < self.nodes[0] || x > self.nodes[n - 1] {
            return None;
        }
        Some(match self.nodes.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        })
    }

    /// `log mu([x, inf))`.
    pub fn log_upper_tail(&self, x: f64) -> f64 {
        let raw = match self.cell_of(x) {
            Some(i) => log_add(self.log_right[i + 1], self.log_int_neg(x, self.nodes[i + 1])),
            None if x < self.nodes[0] => 0.0 + self.log_z,
            None => self.log_tail_beyond(x, 1.0).unwrap_or(f64::NEG_INFINITY),
        };
        (raw - self.log_z).min(0.0)
    }

    /// `log mu((-inf, x])`.
    pub fn log_lower_tail(&self, x: f64) -> f64 {
        let raw = match self.cell_of(x) {
            Some(i) => log_add(self.log_left[i], self.log_int_neg(self.nodes[i], x)),
            None if x > *self.nodes.last().expect("nodes") => self.log_z,
            None => self.log_tail_beyond(x, -1.0).unwrap_or(f64::NEG_INFINITY),
        };
        (raw - self.log_z).min(0.0)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.median {
            self.log_lower_tail(x).exp()
        } else {
            -self.log_upper_tail(x).exp_m1()
        }
    }

    pub fn upper_tail(&self, x: f64) -> f64 {
        self.log_upper_tail(x).exp()
    }

    pub fn lower_tail(&self, x: f64) -> f64 {
        self.log_lower_tail(x).exp()
    }

    fn locate_quantile(&self, p: f64) -> f64 {
        let n = self.nodes.len();
        if p <= 0.5 {
            let target = p.ln() + self.log_z;
            let i = match self.log_left.iter().position(|&v| v > target) {
                Some(0) | None if p <= 0.0 => return f64::NEG_INFINITY,
                Some(0) => return self.nodes[0],
                Some(i) => i - 1,
                None => n - 2,
            };
            let (a, b) = (self.nodes[i], self.nodes[i + 1]);
            quad::bisect(|x| log_add(self.log_left[i], self.log_int_neg(a, x)) - target, a, b, 0.0, 200)
        } else {
            let target = (1.0 - p).ln() + self.log_z;
            let i = match self.log_right.iter().rposition(|&v| v > target) {
                None => return f64::INFINITY,
                Some(i) if i == n - 1 => return self.nodes[n - 1],
                Some(i) => i,
            };
            let (a, b) = (self.nodes[i], self.nodes[i + 1]);
            quad::bisect(|x| log_add(self.log_right[i + 1], self.log_int_neg(x, b)) - target, b, a, 0.0, 200)
        }
    }

    /// Inverse CDF by bisection on the log-space tables.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::DomainError(format!("quantile needs p in (0,1), got {p}")));
        }
        Ok(self.locate_quantile(p))
    }

    /// `log int_m^x 1/rho` for `x > m`, or `log int_x^m 1/rho` for `x < m`.
    pub fn log_inverse_density_integral(&self, x: f64) -> f64 {
        let im = self.median_idx;
        match self.cell_of(x) {
            Some(i) if x >= self.median => {
                let i = i.max(im);
                self.log_z + log_add(self.log_j[i], self.log_int_pos(self.nodes[i], x))
            }
            Some(i) => {
                let i = (i + 1).min(im);
                self.log_z + log_add(self.log_j[i], self.log_int_pos(x, self.nodes[i]))
            }
            None => f64::INFINITY,
        }
    }

    /// `log` of the one-sided weight `mu([x,inf)) * int_m^x 1/rho` (mirrored for `x < m`).
    pub fn log_half_line_weight(&self, x: f64) -> f64 {
        if x == self.median {
            return f64::NEG_INFINITY;
        }
        let tail = if x > self.median {
            self.log_upper_tail(x)
        } else {
            self.log_lower_tail(x)
        };
        tail + self.log_inverse_density_integral(x)
    }

    pub fn half_line_weight(&self, x: f64) -> f64 {
        self.log_half_line_weight(x).exp()
    }

    /// Mass-side tail `mu` beyond `x` on the side away from the median.
    pub fn outer_tail(&self, x: f64) -> f64 {
        if x >= self.median {
            self.upper_tail(x)
        } else {
            self.lower_tail(x)
        }
    }

    /// `int f dmu` over the quadrature window.
    pub fn expectation<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut s = 0.0;
        for w in self.nodes.windows(2) {
            s += gl10(|t| f(t) * self.density(t), w[0], w[1]);
        }
        s
    }

    /// Equal-mass rule: quantiles at the midpoints of `n` probability bins, each with weight `1/n`.
    pub fn quantile_rule(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let xs = (0..n).map(|i| self.locate_quantile((i as f64 + 0.5) / n as f64)).collect();
        (xs, vec![1.0 / n as f64; n])
    }

    /// Gauss-Legendre rule on every cell with density-weighted weights.
    pub fn gauss_rule(&self) -> (Vec<f64>, Vec<f64>) {
        let (gx, gw) = quad::gauss_legendre(10);
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for w in self.nodes.windows(2) {
            let c = 0.5 * (w[0] + w[1]);
            let h = 0.5 * (w[1] - w[0]);
            for (x, wt) in gx.iter().zip(&gw) {
                let t = c + h * x;
                let d = self.density(t);
                if d > 0.0 {
                    xs.push(t);
                    ws.push(wt * h * d);
                }
            }
        }
        (xs, ws)
    }

    /// `x, density, cdf` rows over the window where the density is above `1e-300`.
    pub fn to_csv(&self, points: usize) -> String {
        let (lo, hi) = self.window();
        let lo = self.locate_quantile(1e-12).max(lo);
        let hi = self.locate_quantile(1.0 - 1e-12).min(hi);
        let mut out = String::from("x,density,cdf\n");
        for x in quad::linspace(lo, hi, points) {
            out.push_str(&format!("{x},{},{}\n", self.density(x), self.cdf(x)));
        }
        out
    }
}

fn find_minimum<W: Fn(f64) -> f64>(w: &W) -> Result<(f64, f64)> {
    let mut best = (0.0, w(0.0));
    for k in -24..=60 {
        let r = 10f64.powf(k as f64 / 4.0);
        for x in [r, -r] {
            let v = w(x);
            if v.is_nan() {
                return Err(Error::InvalidInput(format!("potential is NaN at {x}")));
            }
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    if !best.1.is_finite() {
        return Err(Error::NonIntegrable("exponent is unbounded below".into()));
    }
    let x0 = best.0;
    let span = x0.abs().max(1.0) * 0.8;
    let (x, v) = quad::golden_max(|x| -w(x), x0 - span, x0 + span, 1e-12);
    if -v < best.1 {
        Ok((x, -v))
    } else {
        Ok(best)
    }
}

fn march<W: Fn(f64) -> f64>(w: &W, start: f64, dir: f64, w_min: f64, cut: f64, breaks: &[f64]) -> Result<Vec<f64>> {
    let mut probe_ok = false;
    for k in -10..=46 {
        let x = start + dir * 2f64.powi(k);
        let v = w(x);
        if v - w_min >= cut {
            probe_ok = true;
            break;
        }
    }
    if !probe_ok {
        return Err(Error::NonIntegrable(format!(
            "exponent does not rise by {cut} within |x| <= 7e13 in direction {dir}"
        )));
    }
    let mut pts = vec![start];
    let mut x = start;
    let mut wx = w(x);
    let mut h = 1e-3 * x.abs().max(1.0);
    let mut brk: Vec<f64> = breaks.iter().copied().filter(|b| (b - start) * dir > 0.0).collect();
    brk.sort_by(|a, b| (a * dir).total_cmp(&(b * dir)));
    let mut bi = 0;
    while wx - w_min < cut {
        if pts.len() > 2_000_000 {
            return Err(Error::QuadratureFailure("cell budget exhausted while covering the support".into()));
        }
        let mut b = x + dir * h;
        let mut hit_break = false;
        if bi < brk.len() && (b - brk[bi]) * dir >= 0.0 {
            b = brk[bi];
            hit_break = true;
        }
        let wb = w(b);
        let wm = w(0.5 * (x + b));
        let swing = (wb - wx).abs().max((wm - 0.5 * (wx + wb)).abs() * 4.0);
        let h_min = 1e-13 * x.abs().max(1.0);
        if !wb.is_finite() && wb < 0.0 {
            return Err(Error::NonIntegrable(format!("exponent is -inf at {b}")));
        }
        if (swing > MAX_CELL_SWING || !wb.is_finite()) && (b - x).abs() > h_min {
            h = 0.5 * (b - x).abs();
            continue;
        }
        if hit_break {
            bi += 1;
        }
        pts.push(b);
        x = b;
        wx = wb;
        if swing < 0.25 * MAX_CELL_SWING {
            h = (2.0 * h).min(0.5 * x.abs().max(1.0));
        }
    }
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace() -> LineMeasure {
        LineMeasure::new(Potential::abs_power(1.0, 1.0).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn u_alpha_matches_closed_form() {
        let u = Potential::u_alpha(1.5).unwrap();
        assert!((u.evaluate(0.0) - 0.15625).abs() < 1e-15);
        assert!((u.evaluate(2.0) - 2f64.powf(1.5)).abs() < 1e-15);
        for x in [1.0 - 1e-9, 1.0 + 1e-9] {
            assert!((u.evaluate(x) - 1.0).abs() < 1e-8);
            assert!((u.derivative(x) - 1.5).abs() < 1e-8);
            assert!((u.second_derivative(x) - 0.75).abs() < 1e-8);
        }
        assert!(Potential::u_alpha(2.0).is_err());
        assert!(Potential::u_alpha(1.0).is_err());
    }

    #[test]
    fn laplace_normalizer_and_median() {
        let m = laplace();
        assert!((m.normalizer() - 2.0).abs() < 1e-10);
        assert!(m.median().abs() < 1e-10);
        assert!((m.cdf(1.0) - (1.0 - 0.5 * (-1f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn gaussian_normalizer() {
        let m = LineMeasure::new(Potential::abs_power(2.0, 0.5).unwrap(), 1.0).unwrap();
        assert!((m.normalizer() - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-9);
        assert!((m.quantile(0.975).unwrap() - 1.959963984540054).abs() < 1e-8);
    }

    #[test]
    fn laplace_half_line_weight_closed_form() {
        let m = laplace();
        for x in [0.1, 1.0, 5.0, 40.0] {
            let w = m.half_line_weight(x);
            assert!((w - (1.0 - (-x).exp())).abs() < 1e-9, "x={x} w={w}");
            assert!((m.half_line_weight(-x) - w).abs() < 1e-9);
        }
    }

    #[test]
    fn deep_tails_stay_finite() {
        let m = laplace();
        let lt = m.log_upper_tail(250.0);
        assert!((lt - (-250.0 - 2f64.ln())).abs() < 1e-8);
        assert!((m.quantile(1e-100).unwrap() - (2e-100f64).ln()).abs() < 1e-8);
    }

    #[test]
    fn growing_density_is_rejected() {
        let p = Potential::from_fn("neg_log", |x: f64| -(1.0 + x * x).ln());
        assert!(matches!(LineMeasure::new(p, 1.0), Err(Error::NonIntegrable(_))));
    }

    #[test]
    fn table_potential_roundtrips_csv() {
        let mut csv = String::from("x,V\n");
        for k in -200..=200 {
            let x = k as f64 * 0.1;
            csv.push_str(&format!("{x},{}\n", 0.5 * x * x));
        }
        let p = Potential::from_csv(&csv).unwrap();
        let m = LineMeasure::new(p, 1.0).unwrap();
        assert!((m.normalizer() - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-5);
        let out = m.to_csv(11);
        assert_eq!(out.lines().count(), 12);
    }

    #[test]
    fn expectation_of_second_moment() {
        let m = laplace();
        assert!((m.expectation(|x| x * x) - 2.0).abs() < 1e-9);
    }
}
