//! Brute-force checks on small finite state spaces.
//!
//! The energy is `E(f) = sum_e c_e (f_u - f_v)^2` over the edge list, with no
//! factor 1/2. Every constant reported here is relative to that convention.

use crate::error::{Error, Result};
use crate::fgrowth::{find_lambda, FGrowth};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const CONVENTION: &str = "edge differences, E(f) = sum c_e (f_u - f_v)^2";

/// Largest space for which subsets are enumerated.
pub const MAX_ENUM_STATES: usize = 16;

/// Largest space for function-corpus tests.
pub const MAX_STATES: usize = 4096;

/// Level-set constant of the Hardy reduction at its optimal ratio.
pub fn optimal_proof_factor() -> f64 {
    (11.0 + 5.0 * 5f64.sqrt()) / 2.0
}

/// `rho (sqrt rho + 1) / (sqrt rho - 1)` for level ratio `rho > 1`.
pub fn proof_factor(rho: f64) -> f64 {
    let s = rho.sqrt();
    rho * (s + 1.0) / (s - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub c: f64,
}

/// A probability on `0..n` with a weighted edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteSpace {
    pub weights: Vec<f64>,
    pub edges: Vec<Edge>,
}

impl FiniteSpace {
    pub fn new(weights: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let s = FiniteSpace { weights, edges: edges.into_iter().map(|(u, v, c)| Edge { u, v, c }).collect() };
        s.validate()?;
        Ok(s)
    }

    /// Weights are normalized when they are positive but do not sum to one.
    pub fn normalized(mut weights: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let z: f64 = weights.iter().sum();
        if !(z > 0.0) {
            return Err(Error::InvalidInput("weights must have positive mass".into()));
        }
        weights.iter_mut().for_each(|w| *w /= z);
        Self::new(weights, edges)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.weights.len();
        if n == 0 || n > MAX_STATES {
            return Err(Error::InvalidInput(format!("state count {n} outside 1..={MAX_STATES}")));
        }
        if self.weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidInput("weights must be finite and nonnegative".into()));
        }
        let z: f64 = self.weights.iter().sum();
        if (z - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("weights sum to {z}, not 1")));
        }
        for e in &self.edges {
            if e.u >= n || e.v >= n || e.u == e.v {
                return Err(Error::InvalidInput(format!("bad edge ({}, {})", e.u, e.v)));
            }
            if !(e.c >= 0.0) || !e.c.is_finite() {
                return Err(Error::InvalidInput(format!("conductance {} on ({}, {})", e.c, e.u, e.v)));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Path `0 - 1 - ... - (n-1)` with unit conductances and uniform weights.
    pub fn path(n: usize) -> Result<Self> {
        Self::normalized(vec![1.0; n], (1..n).map(|i| (i - 1, i, 1.0)).collect())
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v, 1.0));
            }
        }
        Self::normalized(vec![1.0; n], e)
    }

    pub fn two_point(p: f64, c: f64) -> Result<Self> {
        Self::new(vec![p, 1.0 - p], vec![(0, 1, c)])
    }

    /// Random tree: weights uniform in `[0.1, 1]`, conductances in `[0.1, 2]`.
    pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        let e = (1..n).map(|i| (rng.random_range(0..i), i, rng.random_range(0.1..2.0))).collect();
        Self::normalized(w, e)
    }

    /// Random tree plus each remaining pair with probability `extra`.
    pub fn random_connected(n: usize, extra: f64, rng: &mut ChaCha8Rng) -> Result<Self> {
        let mut s = Self::random_tree(n, rng)?;
        for u in 0..n {
            for v in u + 1..n {
                if !s.edges.iter().any(|e| (e.u, e.v) == (u, v) || (e.u, e.v) == (v, u)) && rng.random::<f64>() < extra {
                    s.edges.push(Edge { u, v, c: rng.random_range(0.1..2.0) });
                }
            }
        }
        Ok(s)
    }

    /// Product space with axis-wise edges. The edge `(u,y)-(v,y)` carries
    /// `c mu2(y)`, so the energy is `sum_y mu2(y) E1(f(.,y)) + sum_x mu1(x) E2(f(x,.))`.
    /// State `(x, y)` has index `x * n2 + y`.
    pub fn product(a: &FiniteSpace, b: &FiniteSpace) -> Result<Self> {
        let (n1, n2) = (a.n(), b.n());
        let mut w = Vec::with_capacity(n1 * n2);
        for x in 0..n1 {
            for y in 0..n2 {
                w.push(a.weights[x] * b.weights[y]);
            }
        }
        let mut e = Vec::new();
        for ed in &a.edges {
            for y in 0..n2 {
                e.push((ed.u * n2 + y, ed.v * n2 + y, ed.c * b.weights[y]));
            }
        }
        for ed in &b.edges {
            for x in 0..n1 {
                e.push((x * n2 + ed.u, x * n2 + ed.v, ed.c * a.weights[x]));
            }
        }
        let z: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= z);
        Self::new(w, e)
    }

    /// Same space with every conductance multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.edges.iter_mut().for_each(|e| e.c *= s);
        out
    }

    pub fn energy(&self, f: &[f64]) -> f64 {
        self.edges.iter().map(|e| e.c * (f[e.u] - f[e.v]).powi(2)).sum()
    }

    pub fn mean(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, x)| w * x).sum()
    }

    pub fn mass(&self, set: &[usize]) -> f64 {
        set.iter().map(|&i| self.weights[i]).sum()
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut l = DMatrix::zeros(n, n);
        for e in &self.edges {
            l[(e.u, e.u)] += e.c;
            l[(e.v, e.v)] += e.c;
            l[(e.u, e.v)] -= e.c;
            l[(e.v, e.u)] -= e.c;
        }
        l
    }

    /// Component label of every state restricted to `keep`, through edges with `c > 0`.
    fn components(&self, keep: &[bool]) -> Vec<Option<usize>> {
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            if e.c > 0.0 && keep[e.u] && keep[e.v] {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
        }
        let mut label = vec![None; n];
        let mut next = 0;
        for s in 0..n {
            if !keep[s] || label[s].is_some() {
                continue;
            }
            let mut stack = vec![s];
            label[s] = Some(next);
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if label[v].is_none() {
                        label[v] = Some(next);
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.components(&vec![true; self.n()]).iter().all(|l| *l == Some(0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterConstraint {
    /// `f = 0` off a given set.
    Set,
    /// `mu(f = 0) >= 1/2`, attained on the reported maximal set.
    MedianMass,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapacityResult {
    pub value: f64,
    pub minimizer: Vec<f64>,
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
    pub constraint: OuterConstraint,
    /// Net current out of the inner set; equals `value` for a harmonic minimizer.
    pub flux: f64,
    /// Free states with no path to the boundary; set to zero at no cost.
    pub floating: Vec<usize>,
}

/// `inf { E(f) : f = 1 on a, f = 0 off omega }` by harmonic extension.
pub fn capacity(space: &FiniteSpace, a: &[usize], omega: &[usize]) -> Result<CapacityResult> {
    let n = space.n();
    if a.is_empty() {
        return Err(Error::InvalidInput("inner set is empty".into()));
    }
    let mut in_a = vec![false; n];
    let mut in_omega = vec![false; n];
    for &i in omega {
        if i >= n {
            return Err(Error::InvalidInput(format!("state {i} out of range")));
        }
        in_omega[i] = true;
    }
    for &i in a {
        if i >= n || !in_omega[i] {
            return Err(Error::InvalidInput(format!("state {i} of A is not in Omega")));
        }
        in_a[i] = true;
    }
    let mut f = vec![0.0; n];
    a.iter().for_each(|&i| f[i] = 1.0);
    let free_mask: Vec<bool> = (0..n).map(|i| in_omega[i] && !in_a[i]).collect();

    // A free component touching no boundary state can take any constant.
    let label = space.components(&free_mask);
    let ncomp = label.iter().flatten().max().map_or(0, |m| m + 1);
    let mut grounded = vec![false; ncomp];
    for e in &space.edges {
        if e.c <= 0.0 {
            continue;
        }
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            if let (Some(l), false) = (label[x], free_mask[y]) {
                grounded[l] = true;
            }
        }
    }
    let floating: Vec<usize> = (0..n).filter(|&i| label[i].is_some_and(|l| !grounded[l])).collect();
    let free: Vec<usize> = (0..n).filter(|&i| label[i].is_some_and(|l| grounded[l])).collect();

    if !free.is_empty() {
        let mut pos = vec![usize::MAX; n];
        free.iter().enumerate().for_each(|(k, &i)| pos[i] = k);
        let m = free.len();
        let mut lff = DMatrix::<f64>::zeros(m, m);
        let mut rhs = DVector::<f64>::zeros(m);
        for e in &space.edges {
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                if pos[x] == usize::MAX {
                    continue;
                }
                lff[(pos[x], pos[x])] += e.c;
                if pos[y] != usize::MAX {
                    lff[(pos[x], pos[y])] -= e.c;
                } else {
                    rhs[pos[x]] += e.c * f[y];
                }
            }
        }
        let sol = match lff.clone().cholesky() {
            Some(ch) => ch.solve(&rhs),
            None => lff.lu().solve(&rhs).ok_or_else(|| Error::Disconnected("singular harmonic system".into()))?,
        };
        free.iter().enumerate().for_each(|(k, &i)| f[i] = sol[k]);
    }
    let value = space.energy(&f);
    let flux = space
        .edges
        .iter()
        .map(|e| match (in_a[e.u], in_a[e.v]) {
            (true, false) => e.c * (f[e.u] - f[e.v]),
            (false, true) => e.c * (f[e.v] - f[e.u]),
            _ => 0.0,
        })
        .sum();
    Ok(CapacityResult {
        value,
        minimizer: f,
        inner: a.to_vec(),
        outer: omega.to_vec(),
        constraint: OuterConstraint::Set,
        flux,
        floating,
    })
}

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn mask_mass(space: &FiniteSpace, mask: u32) -> f64 {
    (0..space.n()).filter(|&i| mask >> i & 1 == 1).map(|i| space.weights[i]).sum()
}

fn check_enumerable(space: &FiniteSpace) -> Result<()> {
    if space.n() > MAX_ENUM_STATES {
        return Err(Error::InvalidInput(format!("{} states exceed the enumeration cap {MAX_ENUM_STATES}", space.n())));
    }
    Ok(())
}

/// Sets of mass at most 1/2 that cannot be enlarged.
pub fn maximal_half_sets(space: &FiniteSpace) -> Result<Vec<u32>> {
    check_enumerable(space)?;
    let n = space.n();
    let full = (1u32 << n) - 1;
    let ok = |m: u32| mask_mass(space, m) <= 0.5 + 1e-15;
    Ok((1..=full).filter(|&m| ok(m) && (0..n).all(|j| m >> j & 1 == 1 || !ok(m | 1 << j))).collect())
}

/// `Cap_mu(A)`: capacity with the constraint `mu(f = 0) >= 1/2`.
pub fn capacity_mu(space: &FiniteSpace, a: &[usize]) -> Result<CapacityResult> {
    let sets = maximal_half_sets(space)?;
    capacity_mu_with(space, a, &sets)
}

fn capacity_mu_with(space: &FiniteSpace, a: &[usize], maximal: &[u32]) -> Result<CapacityResult> {
    let amask = a.iter().fold(0u32, |m, &i| m | 1 << i);
    let mut best: Option<CapacityResult> = None;
    for &om in maximal.iter().filter(|&&m| m & amask == amask) {
        let r = capacity(space, a, &members(om, space.n()))?;
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    let mut r = best.ok_or_else(|| Error::InvalidInput("inner set has mass above 1/2".into()))?;
    r.constraint = OuterConstraint::MedianMass;
    Ok(r)
}

/// Generalized eigenvalues of `(l, diag(w))`, ascending.
fn pencil_eigenvalues(l: &DMatrix<f64>, w: &[f64]) -> Result<Vec<f64>> {
    if w.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidInput("eigen pencil needs positive weights".into()));
    }
    let s: Vec<f64> = w.iter().map(|x| 1.0 / x.sqrt()).collect();
    let m = DMatrix::from_fn(l.nrows(), l.ncols(), |i, j| s[i] * l[(i, j)] * s[j]);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Spectral gap of the pencil `(L, diag(mu))` and `C_P = 1 / gap`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoincareExact {
    pub gap: f64,
    pub c_p: f64,
}

pub fn poincare_exact(space: &FiniteSpace) -> Result<PoincareExact> {
    if space.n() < 2 {
        return Err(Error::InvalidInput("Poincare needs at least two states".into()));
    }
    if !space.is_connected() {
        return Err(Error::Disconnected("Poincare constant is infinite".into()));
    }
    let ev = pencil_eigenvalues(&space.laplacian(), &space.weights)?;
    Ok(PoincareExact { gap: ev[1], c_p: 1.0 / ev[1] })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HardyReduction {
    /// `max_{A in Omega} mu(A) / Cap(A, Omega)`.
    pub b: f64,
    /// Best constant in `sum mu f^2 <= C E(f)` for `f = 0` off `Omega`.
    pub c: f64,
    pub ratio: f64,
    pub argmax: Vec<usize>,
    pub proof_factor: f64,
    pub holds: bool,
    pub convention: String,
}

/// `B <= C <= proof_factor(rho) B` on the sets `A` inside `omega`.
pub fn verify_hardy_reduction(space: &FiniteSpace, omega: &[usize], rho: f64) -> Result<HardyReduction> {
    check_enumerable(space)?;
    if !(rho > 1.0) {
        return Err(Error::DomainError(format!("level ratio rho = {rho} must exceed 1")));
    }
    let n = space.n();
    if omega.is_empty() || omega.len() >= n {
        return Err(Error::InvalidInput("Omega must be a nonempty proper subset".into()));
    }
    let mut b = 0.0;
    let mut argmax = Vec::new();
    for sub in 1..(1u32 << omega.len()) {
        let a: Vec<usize> = (0..omega.len()).filter(|&k| sub >> k & 1 == 1).map(|k| omega[k]).collect();
        let cap = capacity(space, &a, omega)?;
        if !cap.floating.is_empty() || !(cap.value > 0.0) {
            return Err(Error::Disconnected(format!("part of Omega is not linked to its complement: {:?}", cap.floating)));
        }
        let r = space.mass(&a) / cap.value;
        if r > b {
            b = r;
            argmax = a;
        }
    }
    let lo = DMatrix::from_fn(omega.len(), omega.len(), |i, j| space.laplacian()[(omega[i], omega[j])]);
    let w: Vec<f64> = omega.iter().map(|&i| space.weights[i]).collect();
    let c = 1.0 / pencil_eigenvalues(&lo, &w)?[0];
    let factor = proof_factor(rho);
    let ratio = c / b;
    Ok(HardyReduction {
        b,
        c,
        ratio,
        argmax,
        proof_factor: factor,
        holds: b <= c * (1.0 + 1e-10) && c <= factor * b * (1.0 + 1e-10),
        convention: CONVENTION.into(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AkReport {
    /// Smallest `C` satisfying the premise on the tested window.
    pub c: f64,
    /// `max_k 2^{2k} a_k F(1/a_k)`.
    pub conclusion_max: f64,
    pub lambda: f64,
    pub holds: bool,
}

/// Premise and conclusion of the dyadic sequence bound for `a_{k0}, a_{k0+1}, ...`.
/// The sequence is extended by `a_{k0}` below the window and by `0` above it.
pub fn verify_sequence_bound(f: &FGrowth, lambda: f64, k0: i32, a: &[f64]) -> Result<AkReport> {
    if a.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    if a.iter().any(|&x| !(0.0..=0.5).contains(&x)) || a.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidInput("sequence must be non-increasing in [0, 1/2]".into()));
    }
    let at = |k: i32| -> f64 {
        if k < k0 {
            a[0]
        } else {
            a.get((k - k0) as usize).copied().unwrap_or(0.0)
        }
    };
    let scale = |k: i32| 2f64.powi(2 * k);
    let mut c: f64 = 0.0;
    let mut concl: f64 = 0.0;
    for k in k0 - 1..k0 + a.len() as i32 {
        let ak = at(k);
        if ak > 0.0 {
            let fk = f.eval(1.0 / ak);
            c = c.max(scale(k) * at(k + 1) * fk);
            concl = concl.max(scale(k) * ak * fk);
        }
    }
    Ok(AkReport { c, conclusion_max: concl, lambda, holds: concl <= lambda * c * (1.0 + 1e-12) })
}

/// `sum mu f^2 F(f^2 / mu(f^2))` with `0 F(0) = 0`.
pub fn f_entropy(space: &FiniteSpace, f: &[f64], growth: &FGrowth) -> f64 {
    let m: f64 = space.weights.iter().zip(f).map(|(w, x)| w * x * x).sum();
    if !(m > 0.0) {
        return 0.0;
    }
    space
        .weights
        .iter()
        .zip(f)
        .map(|(w, x)| {
            let r = x * x / m;
            if r > 0.0 {
                w * x * x * growth.eval(r)
            } else {
                0.0
            }
        })
        .sum()
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn centered(space: &FiniteSpace, f: &[f64]) -> Vec<f64> {
    let m = space.mean(f);
    f.iter().map(|x| x - m).collect()
}

/// Random test functions: Gaussians, their absolute values and exponentials,
/// indicators of random sets, and ramps in graph distance.
pub fn random_corpus(space: &FiniteSpace, size: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = space.n();
    let mut out = Vec::with_capacity(size);
    let dist = |src: usize| -> Vec<f64> {
        let mut d = vec![f64::INFINITY; n];
        d[src] = 0.0;
        let mut frontier = vec![src];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &u in &frontier {
                for e in &space.edges {
                    for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                        if x == u && d[y].is_infinite() {
                            d[y] = d[u] + 1.0;
                            next.push(y);
                        }
                    }
                }
            }
            frontier = next;
        }
        d.iter().map(|&x| if x.is_finite() { x } else { n as f64 }).collect()
    };
    while out.len() < size {
        let f: Vec<f64> = match out.len() % 5 {
            0 => (0..n).map(|_| normal(rng)).collect(),
            1 => (0..n).map(|_| normal(rng).abs()).collect(),
            2 => (0..n).map(|_| (2.0 * normal(rng)).exp()).collect(),
            3 => {
                let p = rng.random::<f64>();
                (0..n).map(|_| if rng.random::<f64>() < p { 1.0 } else { 0.0 }).collect()
            }
            _ => {
                let d = dist(rng.random_range(0..n));
                let r = rng.random_range(0.5..n as f64);
                d.iter().map(|&x| (1.0 - x / r).max(0.0)).collect()
            }
        };
        if space.energy(&f) > 1e-300 {
            out.push(f);
        }
    }
    out
}

/// Coordinate ascent on `objective` from `f`, halving the step on failure.
pub fn refine(f: &[f64], objective: &dyn Fn(&[f64]) -> f64, sweeps: usize) -> (Vec<f64>, f64) {
    let mut x = f.to_vec();
    let mut best = objective(&x);
    let mut step = 0.25 * x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-3);
    for _ in 0..sweeps {
        let mut moved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let old = x[i];
                x[i] = old + dir * step;
                let v = objective(&x);
                if v > best {
                    best = v;
                    moved = true;
                } else {
                    x[i] = old;
                }
            }
        }
        if !moved {
            step *= 0.5;
            if step < 1e-9 {
                break;
            }
        }
    }
    (x, best)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FsobcapReport {
    /// Largest corpus ratio `f-entropy / E(f)`; a lower bound for the best `D`.
    pub d: f64,
    pub lambda: f64,
    pub corpus_size: usize,
    pub sets_checked: usize,
    /// `max_A mu(A) F(1/mu(A)) / (4 lambda D Cap_mu(A))`.
    pub worst_ratio: f64,
    pub violations: usize,
    pub convention: String,
}

/// Truncations `min((g - 2^k s)_+, 2^k s)` with `s = sqrt(mu(g^2))` over every
/// level `k` that yields a distinct nonzero function.
pub fn dyadic_truncations(space: &FiniteSpace, g: &[f64]) -> Vec<Vec<f64>> {
    let s = space.weights.iter().zip(g).map(|(w, x)| w * x * x).sum::<f64>().sqrt();
    let pos = g.iter().copied().filter(|&x| x > 0.0);
    let (lo, hi) = pos.fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
    if !(s > 0.0) || !lo.is_finite() {
        return Vec::new();
    }
    let k_lo = (lo / s).log2().floor() as i32 - 2;
    let k_hi = (hi / s).log2().ceil() as i32 + 1;
    (k_lo..=k_hi)
        .map(|k| {
            let t = 2f64.powi(k) * s;
            g.iter().map(|&x| (x - t).max(0.0).min(t)).collect::<Vec<f64>>()
        })
        .filter(|h| h.iter().any(|&x| x > 0.0))
        .collect()
}

/// The capacity-measure conclusion `mu(A) F(1/mu(A)) <= 4 lambda D Cap_mu(A)`
/// over every `A` with `mu(A) <= 1/2`. `D` is the corpus maximum; the corpus
/// holds random functions plus capacitary potentials and their dyadic truncations.
pub fn verify_fsobcap(space: &FiniteSpace, growth: &FGrowth, lambda: Option<f64>, corpus: usize, seed: u64) -> Result<FsobcapReport> {
    check_enumerable(space)?;
    let lambda = match lambda {
        Some(l) => l,
        None => find_lambda(growth)?,
    };
    let n = space.n();
    let maximal = maximal_half_sets(space)?;
    let mut caps = Vec::new();
    for mask in 1..(1u32 << n) {
        if mask_mass(space, mask) <= 0.5 + 1e-15 {
            let a = members(mask, n);
            let cap = capacity_mu_with(space, &a, &maximal)?;
            caps.push((space.mass(&a), cap));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fs = random_corpus(space, corpus, &mut rng);
    for (_, cap) in &caps {
        fs.extend(dyadic_truncations(space, &cap.minimizer));
        fs.push(cap.minimizer.clone());
    }
    let mut d: f64 = 0.0;
    for f in &fs {
        let e = space.energy(f);
        let lhs = f_entropy(space, f, growth);
        if e <= 1e-300 {
            if lhs > 1e-300 {
                return Err(Error::HypothesisViolation("F-Sobolev fails on a zero-energy function".into()));
            }
            continue;
        }
        d = d.max(lhs / e);
    }
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for (m, cap) in &caps {
        let lhs = m * growth.eval(1.0 / m);
        let rhs = 4.0 * lambda * d * cap.value;
        if lhs > rhs * (1.0 + 1e-9) + 1e-300 {
            violations += 1;
        }
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    Ok(FsobcapReport {
        d,
        lambda,
        corpus_size: fs.len(),
        sets_checked: caps.len(),
        worst_ratio: worst,
        violations,
        convention: CONVENTION.into(),
    })
}

/// The function `Phi` in `int Phi(f^2) - Phi(int f^2) <= E(f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phi {
    /// `Phi(x) = x`, the variance.
    Variance,
    /// `Phi(x) = x log x`, the entropy.
    Entropy,
}

impl Phi {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Phi::Variance => x,
            Phi::Entropy if x > 0.0 => x * x.ln(),
            Phi::Entropy => 0.0,
        }
    }

    /// `int Phi(f^2) - Phi(int f^2)`; for `Variance` this is `Var(f)` after
    /// centering, so it is evaluated on `f - mean`.
    pub fn deficit(self, space: &FiniteSpace, f: &[f64]) -> f64 {
        let g = match self {
            Phi::Variance => centered(space, f),
            Phi::Entropy => f.to_vec(),
        };
        let m: f64 = space.weights.iter().zip(&g).map(|(w, x)| w * x * x).sum();
        let a: f64 = space.weights.iter().zip(&g).map(|(w, x)| w * self.eval(x * x)).sum();
        a - self.eval(m)
    }
}

/// Smallest `c` with `deficit <= c E` on a space: exact for `Variance`,
/// closed form on two points for `Entropy`, a refined corpus maximum otherwise.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PremiseConstant {
    pub value: f64,
    pub exact: bool,
}

pub fn premise_constant(space: &FiniteSpace, phi: Phi, corpus: usize, seed: u64) -> Result<PremiseConstant> {
    if space.n() == 1 {
        return Ok(PremiseConstant { value: 0.0, exact: true });
    }
    match phi {
        Phi::Variance => Ok(PremiseConstant { value: poincare_exact(space)?.c_p, exact: true }),
        Phi::Entropy if space.n() == 2 && space.edges.len() == 1 => {
            let (p, q) = (space.weights[0], space.weights[1]);
            let c: f64 = space.edges.iter().map(|e| e.c).sum();
            if !(c > 0.0) {
                return Err(Error::Disconnected("zero conductance".into()));
            }
            let inv_alpha = if (p - q).abs() < 1e-9 { 2.0 } else { (q / p).ln() / (q - p) };
            Ok(PremiseConstant { value: p * q * inv_alpha / c, exact: true })
        }
        Phi::Entropy => {
            if !space.is_connected() {
                return Err(Error::Disconnected("log-Sobolev constant is infinite".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fs = random_corpus(space, corpus, &mut rng);
            let obj = |f: &[f64]| {
                let e = space.energy(f);
                if e > 1e-300 {
                    phi.deficit(space, f) / e
                } else {
                    0.0
                }
            };
            let best = fs.iter().max_by(|a, b| obj(a).total_cmp(&obj(b))).expect("nonempty corpus");
            Ok(PremiseConstant { value: refine(best, &obj, 200).1, exact: false })
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorReport {
    pub phi: Phi,
    pub c1: PremiseConstant,
    pub c2: PremiseConstant,
    /// Product deficit over product energy after each factor is rescaled to constant 1.
    pub worst_ratio: f64,
    pub violations: usize,
    pub functions: usize,
    /// For `Variance`: exact product gap and `min` of the rescaled factor gaps.
    pub gap_product: Option<f64>,
    pub gap_min: Option<f64>,
}

/// Rescales each factor so its premise holds with constant 1, then searches the
/// product for violations of the same inequality.
pub fn verify_tensorization(s1: &FiniteSpace, s2: &FiniteSpace, phi: Phi, corpus: usize, seed: u64) -> Result<TensorReport> {
    let c1 = premise_constant(s1, phi, corpus, seed)?;
    let c2 = premise_constant(s2, phi, corpus, seed ^ 0x9e37)?;
    let a = if c1.value > 0.0 { s1.scaled(c1.value) } else { s1.clone() };
    let b = if c2.value > 0.0 { s2.scaled(c2.value) } else { s2.clone() };
    let prod = FiniteSpace::product(&a, &b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let fs = random_corpus(&prod, corpus, &mut rng);
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for f in &fs {
        let e = prod.energy(f);
        let d = phi.deficit(&prod, f);
        if d > e * (1.0 + 1e-9) + 1e-14 {
            violations += 1;
        }
        worst = worst.max(d / e);
    }
    let (gap_product, gap_min) = match phi {
        Phi::Variance if prod.n() > 1 => {
            let g = |s: &FiniteSpace| if s.n() > 1 { poincare_exact(s).map(|p| p.gap) } else { Ok(f64::INFINITY) };
            (Some(g(&prod)?), Some(g(&a)?.min(g(&b)?)))
        }
        _ => (None, None),
    };
    Ok(TensorReport { phi, c1, c2, worst_ratio: worst, violations, functions: fs.len(), gap_product, gap_min })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RothausReport {
    /// Largest corpus deficit; a lower bound for the best Rothaus constant.
    pub c_rot: f64,
    pub maximizer: Vec<f64>,
    pub functions: usize,
    pub label: String,
}

fn check_rothaus_hypotheses(growth: &FGrowth) -> Result<()> {
    if growth.eval(1.0).abs() > 1e-10 {
        return Err(Error::HypothesisViolation(format!("{}: F(1) = {} is not 0", growth.tag(), growth.eval(1.0))));
    }
    let xs = crate::quad::logspace(1e-6, 1e12, 400);
    let mut bound: f64 = 0.0;
    for &x in &xs {
        if growth.d1(x) < -1e-12 || growth.d2(x) > 1e-9 * (1.0 + growth.d1(x).abs()) {
            return Err(Error::HypothesisViolation(format!("{} is not concave non-decreasing at {x}", growth.tag())));
        }
        bound = bound.max(x * growth.d1(x));
    }
    let tail = xs[xs.len() - 1] * growth.d1(xs[xs.len() - 1]);
    if !bound.is_finite() || tail > 1.01 * xs[xs.len() - 50] * growth.d1(xs[xs.len() - 50]) + 1e-12 {
        return Err(Error::HypothesisViolation(format!("{}: u F'(u) grows", growth.tag())));
    }
    Ok(())
}

/// `[int f^2 F(f^2/mu f^2) - int g^2 F(g^2/mu g^2)] / ||g||^2` with `g = f - mu(f)`.
pub fn rothaus_ratio(space: &FiniteSpace, f: &[f64], growth: &FGrowth) -> Option<f64> {
    let g = centered(space, f);
    let v: f64 = space.weights.iter().zip(&g).map(|(w, x)| w * x * x).sum();
    if !(v > 1e-24 * space.weights.iter().zip(f).map(|(w, x)| w * x * x).sum::<f64>()) {
        return None;
    }
    Some((f_entropy(space, f, growth) - f_entropy(space, &g, growth)) / v)
}

/// Maximizes the Rothaus deficit over a random corpus, shifted copies and
/// coordinate-ascent refinement of the best candidate.
pub fn rothaus_deficit(space: &FiniteSpace, growth: &FGrowth, corpus: usize, seed: u64) -> Result<RothausReport> {
    check_rothaus_hypotheses(growth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fs = random_corpus(space, corpus, &mut rng);
    let shifts: Vec<Vec<f64>> = fs.iter().take(corpus / 2).map(|f| f.iter().map(|x| x + 3.0).collect()).collect();
    fs.extend(shifts);
    let obj = |f: &[f64]| rothaus_ratio(space, f, growth).unwrap_or(f64::NEG_INFINITY);
    let (best, _) = fs
        .iter()
        .map(|f| (f, obj(f)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::InvalidInput("empty corpus".into()))?;
    let (maximizer, c_rot) = refine(best, &obj, 300);
    Ok(RothausReport { c_rot, maximizer, functions: fs.len(), label: "empirical Rothaus constant".into() })
}

/// Small-perturbation limit of the Rothaus ratio at `f = 1 + eps g`,
/// `mu(g) = 0`, `mu(g^2) = 1`: `4F'(1) + 2F''(1) - int g^2 F(g^2)`.
pub fn rothaus_taylor_limit(space: &FiniteSpace, g: &[f64], growth: &FGrowth) -> f64 {
    4.0 * growth.d1(1.0) + 2.0 * growth.d2(1.0) - f_entropy(space, g, growth)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TightenCheck {
    pub rho: f64,
    pub factor: f64,
    /// `max int f^2 G(..) / (factor int g^2 F(..))` over the corpus.
    pub worst_ratio: f64,
    pub violations: usize,
    pub functions: usize,
}

/// `int f^2 G(f^2/mu f^2) <= ((rho+1)/rho)^2 int g^2 F(g^2/mu g^2)` for `f >= 0`,
/// `g = f - mu(f)`, `G(t) = F(t rho^2 / (rho+1)^2)`. `F` must vanish on `[0, rho^2]`.
pub fn tighten_check(space: &FiniteSpace, growth: &FGrowth, rho: f64, corpus: usize, seed: u64) -> Result<TightenCheck> {
    if !(rho > 0.0) {
        return Err(Error::DomainError(format!("rho = {rho} must be positive")));
    }
    if crate::quad::linspace(0.0, rho * rho, 200).iter().any(|&x| growth.eval(x) != 0.0) {
        return Err(Error::HypothesisViolation(format!("{} does not vanish on [0, rho^2]", growth.tag())));
    }
    let s = rho * rho / ((rho + 1.0) * (rho + 1.0));
    let factor = ((rho + 1.0) / rho).powi(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<Vec<f64>> = random_corpus(space, corpus, &mut rng).into_iter().map(|f| f.iter().map(|x| x.abs()).collect()).collect();
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for f in &fs {
        let m: f64 = space.weights.iter().zip(f).map(|(w, x)| w * x * x).sum();
        if !(m > 0.0) {
            continue;
        }
        let lhs: f64 = space.weights.iter().zip(f).map(|(w, x)| w * x * x * growth.eval(s * x * x / m)).sum();
        let rhs = factor * f_entropy(space, &centered(space, f), growth);
        if lhs > rhs * (1.0 + 1e-10) + 1e-300 {
            violations += 1;
        }
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    Ok(TightenCheck { rho, factor, worst_ratio: worst, violations, functions: fs.len() })
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub instances: usize,
    pub violations: usize,
    pub worst_ratio: f64,
}

fn rng_for(seed: u64, i: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i as u64);
    r
}

fn merge(parts: Vec<Result<(bool, f64)>>) -> Result<FuzzSummary> {
    let mut s = FuzzSummary::default();
    for p in parts {
        let (ok, r) = p?;
        s.instances += 1;
        s.violations += usize::from(!ok);
        s.worst_ratio = s.worst_ratio.max(r);
    }
    Ok(s)
}

/// Hardy reduction on random connected spaces with `3..=max_states` states and
/// a random proper `Omega`; the worst ratio is `C / B`.
pub fn hardy_fuzz(instances: usize, max_states: usize, seed: u64) -> Result<FuzzSummary> {
    let rho = golden_rho();
    let parts = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let n = rng.random_range(3..=max_states.max(3));
            let s = if i % 2 == 0 { FiniteSpace::random_tree(n, &mut rng)? } else { FiniteSpace::random_connected(n, 0.3, &mut rng)? };
            let mut omega: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < 0.6).collect();
            if omega.is_empty() {
                omega.push(0);
            }
            if omega.len() == n {
                omega.pop();
            }
            let r = verify_hardy_reduction(&s, &omega, rho)?;
            Ok((r.holds, r.ratio))
        })
        .collect();
    merge(parts)
}

/// Level ratio minimizing `proof_factor`: `sqrt rho` is the golden ratio.
pub fn golden_rho() -> f64 {
    (3.0 + 5f64.sqrt()) / 2.0
}

/// Random non-increasing sequences in `[0, 1/2]`; the worst ratio is
/// `conclusion / (lambda C)`.
pub fn ak_fuzz(growth: &FGrowth, instances: usize, seed: u64) -> Result<FuzzSummary> {
    let lambda = find_lambda(growth)?;
    let parts = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let len = rng.random_range(1..30);
            let mut a = Vec::with_capacity(len);
            let mut x = 0.5 * rng.random::<f64>().max(1e-3);
            for _ in 0..len {
                a.push(x);
                let u = rng.random::<f64>();
                x *= if u < 0.05 { 0.0 } else if u < 0.3 { 1.0 } else { rng.random::<f64>().powi(3) };
            }
            let k0 = rng.random_range(-8..8);
            let r = verify_sequence_bound(growth, lambda, k0, &a)?;
            let ratio = if r.c > 0.0 { r.conclusion_max / (lambda * r.c) } else { 0.0 };
            Ok((r.holds, ratio))
        })
        .collect();
    merge(parts)
}

/// Capacity-measure conclusion on random connected spaces with
/// `3..=max_states` states.
pub fn fsobcap_fuzz(growth: &FGrowth, instances: usize, max_states: usize, corpus: usize, seed: u64) -> Result<FuzzSummary> {
    let lambda = find_lambda(growth)?;
    let parts = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let n = rng.random_range(3..=max_states.max(3));
            let s = FiniteSpace::random_connected(n, 0.25, &mut rng)?;
            let r = verify_fsobcap(&s, growth, Some(lambda), corpus, seed.wrapping_add(i as u64))?;
            Ok((r.violations == 0, r.worst_ratio))
        })
        .collect();
    merge(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_capacity_by_hand() {
        let s = FiniteSpace::path(3).unwrap();
        let c = capacity(&s, &[0], &[0, 1]).unwrap();
        assert!((c.value - 0.5).abs() < 1e-14);
        assert!((c.minimizer[1] - 0.5).abs() < 1e-14);
        assert_eq!(c.minimizer[2], 0.0);
        assert!((c.flux - c.value).abs() < 1e-12);
    }

    #[test]
    fn series_resistance() {
        for n in 1..12 {
            let s = FiniteSpace::path(n + 1).unwrap();
            let omega: Vec<usize> = (0..n).collect();
            let c = capacity(&s, &[0], &omega).unwrap();
            assert!((c.value - 1.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn plateau_capacity_is_cut_conductance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = FiniteSpace::random_connected(7, 0.4, &mut rng).unwrap();
        let a = [1, 4, 5];
        let c = capacity(&s, &a, &a).unwrap();
        let cut: f64 = s.edges.iter().filter(|e| a.contains(&e.u) != a.contains(&e.v)).map(|e| e.c).sum();
        assert!((c.value - cut).abs() < 1e-12);
    }

    #[test]
    fn two_point_poincare() {
        let s = FiniteSpace::two_point(0.5, 1.0).unwrap();
        assert!((poincare_exact(&s).unwrap().c_p - 0.25).abs() < 1e-14);
    }

    #[test]
    fn complete_graph_gap() {
        // L = n I - J on mean-zero vectors, pencil weight 1/n, so the gap is n^2.
        let s = FiniteSpace::complete(5).unwrap();
        assert!((poincare_exact(&s).unwrap().gap - 25.0).abs() < 1e-10);
    }

    #[test]
    fn disconnected_is_an_error() {
        let s = FiniteSpace::new(vec![0.5, 0.25, 0.25], vec![(0, 1, 1.0)]).unwrap();
        assert!(matches!(poincare_exact(&s), Err(Error::Disconnected(_))));
    }

    #[test]
    fn floating_component_costs_nothing() {
        let s = FiniteSpace::new(vec![0.25; 4], vec![(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let c = capacity(&s, &[0], &[0, 2, 3]).unwrap();
        assert_eq!(c.floating, vec![2, 3]);
        assert!((c.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn proof_factor_minimum() {
        let r = golden_rho();
        assert!((proof_factor(r) - optimal_proof_factor()).abs() < 1e-12);
        assert!(proof_factor(r * 1.01) > proof_factor(r));
        assert!(proof_factor(r / 1.01) > proof_factor(r));
        assert!(optimal_proof_factor() < 11.1);
    }

    #[test]
    fn single_state_omega_ratio_one() {
        let s = FiniteSpace::path(4).unwrap();
        let r = verify_hardy_reduction(&s, &[1], golden_rho()).unwrap();
        assert!((r.b - 0.25 / 2.0).abs() < 1e-14);
        assert!((r.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_point_hardy() {
        // Omega = {0}: B = C = p / c.
        let s = FiniteSpace::two_point(0.3, 2.0).unwrap();
        let r = verify_hardy_reduction(&s, &[0], golden_rho()).unwrap();
        assert!((r.b - 0.15).abs() < 1e-14 && (r.c - 0.15).abs() < 1e-14);
    }

    #[test]
    fn hardy_fuzz_small() {
        let s = hardy_fuzz(40, 8, 11).unwrap();
        assert_eq!(s.violations, 0);
        assert!(s.worst_ratio >= 1.0 && s.worst_ratio <= 4.0);
    }

    #[test]
    fn ak_geometric_sequence() {
        let f = FGrowth::LogBeta { beta: 0.5 };
        let lambda = find_lambda(&f).unwrap();
        let a: Vec<f64> = (0..20).map(|k| 0.5 * 2f64.powi(-k)).collect();
        assert!(verify_sequence_bound(&f, lambda, 0, &a).unwrap().holds);
        let c = verify_sequence_bound(&f, lambda, 0, &[0.25; 10]).unwrap();
        assert!(c.holds);
    }

    #[test]
    fn fsobcap_two_point_log() {
        let s = FiniteSpace::two_point(0.3, 1.5).unwrap();
        let f = FGrowth::LogBeta { beta: 1.0 };
        let cap = capacity_mu(&s, &[0]).unwrap();
        assert!((cap.value - 1.5).abs() < 1e-14);
        let r = verify_fsobcap(&s, &f, None, 200, 1).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.sets_checked, 1);
    }

    #[test]
    fn fsobcap_indicator_chain() {
        let f = FGrowth::Indicator { threshold: 2.0 };
        assert!((find_lambda(&f).unwrap() - 4.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = FiniteSpace::random_connected(7, 0.3, &mut rng).unwrap();
        let r = verify_fsobcap(&s, &f, Some(4.0), 300, 2).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn product_gap_is_min() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = FiniteSpace::random_connected(3, 0.5, &mut rng).unwrap();
        let b = FiniteSpace::random_tree(4, &mut rng).unwrap();
        let p = FiniteSpace::product(&a, &b).unwrap();
        let g = poincare_exact(&p).unwrap().gap;
        let m = poincare_exact(&a).unwrap().gap.min(poincare_exact(&b).unwrap().gap);
        assert!((g - m).abs() < 1e-10 * m);
    }

    #[test]
    fn trivial_factor_tensorization() {
        let a = FiniteSpace::new(vec![1.0], vec![]).unwrap();
        let b = FiniteSpace::two_point(0.3, 1.0).unwrap();
        let r = verify_tensorization(&a, &b, Phi::Entropy, 500, 4).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.worst_ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn entropy_two_point_constant_is_sharp() {
        let s = FiniteSpace::two_point(0.2, 1.0).unwrap();
        let c = premise_constant(&s, Phi::Entropy, 0, 0).unwrap().value;
        let obj = |f: &[f64]| Phi::Entropy.deficit(&s, f) / s.energy(f);
        let (_, best) = refine(&[1.0, 0.9], &obj, 400);
        assert!(best <= c * (1.0 + 1e-9));
        assert!(best > 0.98 * c);
    }

    #[test]
    fn rothaus_taylor_limit_matches() {
        let s = FiniteSpace::new(vec![0.2, 0.3, 0.5], vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let raw = [1.0, -2.0, 0.5];
        let g0 = centered(&s, &raw);
        let nrm = s.weights.iter().zip(&g0).map(|(w, x)| w * x * x).sum::<f64>().sqrt();
        let g: Vec<f64> = g0.iter().map(|x| x / nrm).collect();
        let f = FGrowth::Log;
        let eps = 1e-3;
        let fe: Vec<f64> = g.iter().map(|x| 1.0 + eps * x).collect();
        let r = rothaus_ratio(&s, &fe, &f).unwrap();
        let lim = rothaus_taylor_limit(&s, &g, &f);
        assert!((r - lim).abs() < 2e-2 * lim.abs().max(1.0));
    }

    #[test]
    fn rothaus_constant_is_finite() {
        let f = FGrowth::f_alpha(1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = FiniteSpace::random_connected(8, 0.3, &mut rng).unwrap();
        let a = rothaus_deficit(&s, &f, 400, 1).unwrap().c_rot;
        let b = rothaus_deficit(&s, &f, 400, 2).unwrap().c_rot;
        assert!(a.is_finite() && b.is_finite());
        assert!((a - b).abs() < 0.5 * a.abs().max(b.abs()).max(1.0));
    }

    #[test]
    fn rothaus_rejects_convex() {
        let s = FiniteSpace::two_point(0.5, 1.0).unwrap();
        assert!(rothaus_deficit(&s, &FGrowth::Linear, 10, 0).is_err());
    }

    #[test]
    fn tighten_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = FiniteSpace::random_tree(9, &mut rng).unwrap();
        let r = tighten_check(&s, &FGrowth::LogPlus { shift: 4.0 }, 2.0, 2000, 3).unwrap();
        assert_eq!(r.violations, 0);
    }
}
