//! Batch front end: configuration, dispatch and versioned JSON reports.
//!
//! A run is described by a [`RunConfig`], read from TOML and overridden by
//! command-line flags. Unknown keys are rejected. Every report embeds the
//! fully resolved configuration, so identical configs give identical bytes.

use crate::concentration::{convex_rate_envelope, selfconsistency_cc, ConvexRate};
use crate::error::{Error, Result};
use crate::fgrowth::{beta_of, FGrowth};
use crate::finite_oracle::{self as fo, FiniteSpace, Phi};
use crate::gross_schedule::{integrate_schedule, SobolevBudget};
use crate::hardy_criteria::{asymptotic_check, beckner_b, beckner_bt, phi_sobolev_d, poincare_b, rosen_d, TFunction};
use crate::isoperimetry::{cheeger_lower, dimension_free_for_nu_alpha, profile_csv};
use crate::langevin_lab::{
    default_test_set, empirical_hyperboundedness, feynman_kac_weight, integrability_threshold, simulate_pt, well_envelope, Diffusion, Psi,
    TrajectoryBatch, WellMethodParams,
};
use crate::line_measure::{LineMeasure, MeasureOptions, Potential};
use crate::orlicz::{gauge_norm, orlicz_dual_norm, tau_entropy, OrliczSample, YoungFunction, YoungPair};
use crate::quad;
use crate::verify::{verify_criteria, Fault, SuiteLevel, SuiteOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::Path;

pub const SCHEMA: &str = "hyperineq.report/1";
pub const SEED_ENV: &str = "HYPERINEQ_SEED";
pub const DEFAULT_SEED: u64 = 20240;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Measure,
    Orlicz,
    Criteria,
    Schedule,
    Simulate,
    Concentration,
    Isoperimetry,
    Oracle,
    Verify,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSection {
    /// `nu_alpha:A`, `m_alpha:A`, `abs_power:P[:C]`, `gaussian`, `laplace` or `csv:PATH`.
    pub spec: Option<String>,
    /// Quadrature tolerance.
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySection {
    /// `poincare`, `beckner`, `beckner_t`, `phi_sobolev`, `rosen` or `asymptotic`.
    pub name: Option<String>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    /// A number or `auto` for `2(1 - 1/alpha)`.
    pub beta: Option<String>,
    /// Exponent of `T(x) = x^t_beta`.
    pub t_beta: Option<f64>,
    /// Growth function: `log`, `linear`, `log_beta:B`, `log_plus:S`, `f_alpha:A`, `f_alpha_tilde:A:R`, `indicator:X`.
    pub growth: Option<String>,
    /// Young function: `power:P[:C]`, `tau_q:P:Q:GROWTH`, `example:A`, `exp_square`.
    pub pair: Option<String>,
    pub normalize: Option<bool>,
    /// Test function for gauge norms: `one`, `x`, `square`.
    pub test: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    /// A number or the path of a criteria JSON report.
    pub c_f: Option<String>,
    pub c_tilde: Option<f64>,
    pub horizon: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    /// `weight`, `pt`, `threshold` or `hyperbound`.
    pub what: Option<String>,
    /// `u_alpha` or `quadratic`.
    pub potential: Option<String>,
    pub dim: Option<usize>,
    pub x: Option<Vec<f64>>,
    pub t: Option<Vec<f64>>,
    pub n_traj: Option<usize>,
    pub h: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcentrationSection {
    pub coeff: Option<f64>,
    pub t: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    /// `capacity`, `capacity_mu`, `poincare`, `hardy`, `fsobcap`, `tensor`, `rothaus` or `tighten`.
    pub task: Option<String>,
    /// Path of a TOML or JSON space file, or `random:N`.
    pub space: Option<String>,
    pub a: Option<Vec<usize>>,
    pub omega: Option<Vec<usize>>,
    pub rho: Option<f64>,
    pub corpus: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub level: Option<String>,
    /// `criterion:factor`.
    pub inject: Option<String>,
    pub criteria: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub json: Option<String>,
    pub csv: Option<String>,
    pub points: Option<usize>,
}

/// Everything a run needs; missing values take documented defaults in [`RunConfig::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub measure: MeasureSection,
    #[serde(default)]
    pub family: FamilySection,
    #[serde(default)]
    pub schedule: ScheduleSection,
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub concentration: ConcentrationSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub output: OutputSection,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($f:ident),+) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )+
    };
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Values set in `other` win.
    pub fn merge(mut self, other: &RunConfig) -> Self {
        overlay!(self, other, command, seed);
        overlay!(self.measure, other.measure, spec, tol);
        overlay!(self.family, other.family, name, alpha, p, beta, t_beta, growth, pair, normalize, test);
        overlay!(self.schedule, other.schedule, c_f, c_tilde, horizon);
        overlay!(self.simulate, other.simulate, what, potential, dim, x, t, n_traj, h);
        overlay!(self.concentration, other.concentration, coeff, t);
        overlay!(self.oracle, other.oracle, task, space, a, omega, rho, corpus);
        overlay!(self.verify, other.verify, level, inject, criteria);
        overlay!(self.output, other.output, json, csv, points);
        self
    }

    /// Fills the seed from the environment or the default. Other defaults are
    /// applied by the commands and echoed in their results.
    pub fn resolve(mut self) -> Result<Self> {
        if self.command.is_none() {
            return Err(Error::Config("missing key `command`".into()));
        }
        if self.seed.is_none() {
            self.seed = Some(match std::env::var(SEED_ENV) {
                Ok(s) => s.trim().parse().map_err(|_| Error::Config(format!("{SEED_ENV}={s:?} is not an integer")))?,
                Err(_) => DEFAULT_SEED,
            });
        }
        Ok(self)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn points(&self, default: usize) -> usize {
        self.output.points.unwrap_or(default)
    }
}

/// A versioned report with the resolved configuration embedded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: Command,
    pub config: RunConfig,
    /// The inequality or identity the result rests on, in words.
    pub basis: String,
    pub convention: String,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub csv: Option<String>,
    /// `0` on success, `2` when a verified check fails.
    pub exit_code: i32,
}

/// Exit status for an error: `2` for a violated hypothesis, `1` otherwise.
pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_hypothesis_violation() {
        2
    } else {
        1
    }
}

fn need<T: Clone>(v: &Option<T>, key: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::Config(format!("missing key `{key}`")))
}

fn num(s: &str, key: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Config(format!("`{key}`: {s:?} is not a number")))
}

fn split_spec(s: &str) -> (String, Vec<String>) {
    let mut it = s.split(':');
    let head = it.next().unwrap_or("").trim().to_string();
    (head, it.map(|x| x.trim().to_string()).collect())
}

pub fn parse_measure(spec: &str, tol: Option<f64>) -> Result<LineMeasure> {
    let (head, args) = split_spec(spec);
    let arg = |i: usize| -> Result<f64> { num(args.get(i).ok_or_else(|| Error::Config(format!("`measure.spec` {spec:?} needs argument {}", i + 1)))?, "measure.spec") };
    let (pot, scale) = match head.as_str() {
        "nu_alpha" => (Potential::u_alpha_closed(check_alpha(arg(0)?)?), 2.0),
        "m_alpha" => (Potential::abs_power(arg(0)?, 1.0)?, 1.0),
        "abs_power" => (Potential::abs_power(arg(0)?, if args.len() > 1 { arg(1)? } else { 1.0 })?, 1.0),
        "gaussian" => (Potential::abs_power(2.0, 0.5)?, 1.0),
        "laplace" => (Potential::abs_power(1.0, 1.0)?, 1.0),
        "csv" => {
            let path = args.join(":");
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("`measure.spec` {path}: {e}")))?;
            (Potential::from_csv(&text)?, 1.0)
        }
        _ => return Err(Error::Config(format!("`measure.spec`: unknown measure {head:?}"))),
    };
    let mut opts = MeasureOptions::default();
    if let Some(t) = tol {
        opts.tol = t;
    }
    LineMeasure::with_options(pot, scale, opts)
}

fn check_alpha(a: f64) -> Result<f64> {
    if (1.0..=2.0).contains(&a) {
        Ok(a)
    } else {
        Err(Error::Config(format!("alpha must lie in [1, 2], got {a}")))
    }
}

pub fn parse_growth(spec: &str) -> Result<FGrowth> {
    let (head, args) = split_spec(spec);
    let arg = |i: usize| -> Result<f64> { num(args.get(i).ok_or_else(|| Error::Config(format!("`family.growth` {spec:?} needs argument {}", i + 1)))?, "family.growth") };
    Ok(match head.as_str() {
        "log" => FGrowth::Log,
        "linear" => FGrowth::Linear,
        "log_beta" => FGrowth::LogBeta { beta: arg(0)? },
        "log_plus" => FGrowth::LogPlus { shift: arg(0)? },
        "f_alpha" => FGrowth::f_alpha(arg(0)?)?,
        "f_alpha_tilde" => FGrowth::f_alpha_tilde(arg(0)?, arg(1)?)?,
        "indicator" => FGrowth::Indicator { threshold: arg(0)? },
        _ => return Err(Error::Config(format!("`family.growth`: unknown growth {head:?}"))),
    })
}

pub fn parse_young(spec: &str) -> Result<YoungFunction> {
    let (head, args) = split_spec(spec);
    let arg = |i: usize| -> Result<f64> { num(args.get(i).ok_or_else(|| Error::Config(format!("`family.pair` {spec:?} needs argument {}", i + 1)))?, "family.pair") };
    match head.as_str() {
        "power" => YoungFunction::power(arg(0)?, if args.len() > 1 { arg(1)? } else { 1.0 }),
        "tau_q" => YoungFunction::tau_q(arg(0)?, arg(1)?, parse_growth(&args.get(2..).map(|a| a.join(":")).unwrap_or_default())?),
        "example" => YoungFunction::example_pair_generator(arg(0)?),
        "exp_square" => Ok(YoungFunction::exp_square()),
        _ => Err(Error::Config(format!("`family.pair`: unknown Young function {head:?}"))),
    }
}

/// A finite space from a TOML/JSON file with `weights` and `edges = [{u, v, c}]`, or `random:N`.
pub fn parse_space(spec: &str, seed: u64) -> Result<FiniteSpace> {
    if let Some(n) = spec.strip_prefix("random:") {
        let n: usize = n.trim().parse().map_err(|_| Error::Config(format!("`oracle.space`: bad size in {spec:?}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return FiniteSpace::random_connected(n, 0.3, &mut rng);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Config(format!("`oracle.space` {spec}: {e}")))?;
    let s: FiniteSpace = if spec.ends_with(".json") {
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("`oracle.space`: {e}")))?
    } else {
        toml::from_str(&text).map_err(|e| Error::Config(format!("`oracle.space`: {e}")))?
    };
    s.validate()?;
    Ok(s)
}

/// `C_F` from a number or from a criteria report (`K_times_D` when present, else `constant`).
pub fn parse_c_f(spec: &str) -> Result<f64> {
    if let Ok(v) = spec.trim().parse::<f64>() {
        return Ok(v);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Config(format!("`schedule.c_f` {spec}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Config(format!("`schedule.c_f`: {e}")))?;
    let r = v.get("result").unwrap_or(&v);
    r.pointer("/extras/K_times_D")
        .or_else(|| r.get("constant"))
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::Config(format!("`schedule.c_f`: {spec} holds no constant")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

/// Dispatches the resolved configuration.
pub fn run(cfg: RunConfig) -> Result<RunOutput> {
    let cfg = cfg.resolve()?;
    let command = cfg.command.expect("resolved");
    let mut csv = None;
    let mut exit_code = 0;
    let mut convention = String::from("mu(dx) = e^{-scale V(x)} dx / Z; energy int f'^2 dmu");
    let (basis, result) = match command {
        Command::Measure => {
            let m = parse_measure(&need(&cfg.measure.spec, "measure.spec")?, cfg.measure.tol)?;
            if cfg.output.csv.is_some() {
                csv = Some(m.to_csv(cfg.points(401)));
            }
            let mean = m.expectation(|x| x);
            let var = m.expectation(|x| (x - mean) * (x - mean));
            (
                "normalized Boltzmann measure".to_string(),
                json!({"tag": format!("{m:?}"), "log_z": m.log_z(), "median": m.median(), "window": m.window(), "mean": mean, "variance": var}),
            )
        }
        Command::Orlicz => {
            let tau = parse_young(&need(&cfg.family.pair, "family.pair")?)?;
            let pair = if cfg.family.normalize.unwrap_or(false) { YoungPair::normalized(tau)? } else { YoungPair::new(tau)? };
            let sandwich = pair.check_sandwich(&quad::logspace(1e-3, 1e3, 40))?;
            let mut out = json!({"certificate": pair.certificate(), "sandwich_min_max": sandwich});
            if let Some(spec) = &cfg.measure.spec {
                let m = parse_measure(spec, cfg.measure.tol)?;
                let rule = m.quantile_rule(cfg.points(256));
                let test = cfg.family.test.clone().unwrap_or_else(|| "x".into());
                let f = match test.as_str() {
                    "one" => OrliczSample::from_fn(&rule, |_| 1.0),
                    "x" => OrliczSample::from_fn(&rule, |x| x),
                    "square" => OrliczSample::from_fn(&rule, |x| x * x),
                    _ => return Err(Error::Config(format!("`family.test`: unknown test function {test:?}"))),
                };
                out["test"] = json!(test);
                out["l2_norm"] = json!(f.l2_norm());
                out["gauge_norm"] = json!(gauge_norm(&f, &pair)?);
                out["dual_norm"] = to_value(&orlicz_dual_norm(&f, &pair)?);
                out["tau_entropy"] = match tau_entropy(&f, &pair) {
                    Ok(v) => json!(v),
                    Err(e) => json!(e.to_string()),
                };
            }
            ("Luxemburg gauge at level tau(1); y <= tau^{-1}(y) tau*^{-1}(y) <= 2y".to_string(), out)
        }
        Command::Criteria => {
            let spec = need(&cfg.measure.spec, "measure.spec")?;
            let m = parse_measure(&spec, cfg.measure.tol)?;
            let family = cfg.family.name.clone().unwrap_or_else(|| "poincare".into());
            let r = match family.as_str() {
                "poincare" => to_value(&poincare_b(&m)?),
                "beckner" => to_value(&beckner_b(&m, need(&cfg.family.p, "family.p")?)?),
                "beckner_t" => to_value(&beckner_bt(&m, &TFunction::power(need(&cfg.family.t_beta, "family.t_beta")?))?),
                "phi_sobolev" => to_value(&phi_sobolev_d(&m, &parse_growth(&cfg.family.growth.clone().unwrap_or_else(|| "log".into()))?)?),
                "rosen" => {
                    let beta = match cfg.family.beta.as_deref().unwrap_or("auto") {
                        "auto" => {
                            let alpha = match cfg.family.alpha {
                                Some(a) => a,
                                None => match split_spec(&spec) {
                                    (h, a) if h == "nu_alpha" || h == "m_alpha" => num(&a[0], "measure.spec")?,
                                    _ => return Err(Error::Config("`family.beta = auto` needs `family.alpha` or an alpha measure".into())),
                                },
                            };
                            beta_of(alpha)
                        }
                        b => num(b, "family.beta")?,
                    };
                    to_value(&rosen_d(&m, beta)?)
                }
                "asymptotic" => to_value(&asymptotic_check(m.potential(), &TFunction::power(need(&cfg.family.t_beta, "family.t_beta")?))?),
                _ => return Err(Error::Config(format!("`family.name`: unknown family {family:?}"))),
            };
            let basis = r.get("convention").and_then(Value::as_str).unwrap_or("one-dimensional capacity criterion").to_string();
            (basis, r)
        }
        Command::Schedule => {
            let growth = cfg.family.growth.clone().unwrap_or_else(|| "log".into());
            let p = cfg.family.p.unwrap_or(2.0);
            let c_f = parse_c_f(&need(&cfg.schedule.c_f, "schedule.c_f")?)?;
            let c_tilde = cfg.schedule.c_tilde.unwrap_or(0.0);
            let budget = match split_spec(&growth) {
                (h, _) if h == "log" => SobolevBudget::log_sobolev(p, c_f)?,
                (h, a) if h == "f_alpha" => SobolevBudget::f_alpha(num(a.first().map_or("", |s| s.as_str()), "family.growth")?, p, c_f, c_tilde)?,
                _ => return Err(Error::Config(format!("`family.growth`: schedules support log and f_alpha:A, got {growth:?}"))),
            };
            let horizon = cfg.schedule.horizon.unwrap_or(3.0 * c_f);
            let s = integrate_schedule(&budget, horizon)?;
            if cfg.output.csv.is_some() {
                let mut text = String::from("t,q,prefactor\n");
                for (t, q, r) in s.dump(cfg.points(101)) {
                    text.push_str(&format!("{t},{q},{r}\n"));
                }
                csv = Some(text);
            }
            let (q0, r0, rr) = s.rates_at_zero();
            (
                "q' = k(q) / (l(q) C_F), contraction L^p -> L^{tau_q(t)}".to_string(),
                json!({"growth": growth, "p": p, "c_f": c_f, "c_tilde": c_tilde, "horizon": horizon, "q_end": s.q_at(horizon),
                       "prefactor_end": s.prefactor(horizon), "rates_at_zero": [q0, r0, rr], "nodes": s.nodes.len(), "max_rate_excess": s.max_rate_excess}),
            )
        }
        Command::Simulate => {
            convention = "dX = -U'(X) dt + dB, mu = e^{-2U}".into();
            let what = cfg.simulate.what.clone().unwrap_or_else(|| "weight".into());
            let alpha = cfg.family.alpha.unwrap_or(1.5);
            let dim = cfg.simulate.dim.unwrap_or(1);
            let ts = cfg.simulate.t.clone().unwrap_or_else(|| vec![0.5, 1.0]);
            let batch = TrajectoryBatch { seed: cfg.seed(), h: cfg.simulate.h.unwrap_or(1e-3), n_traj: cfg.simulate.n_traj.unwrap_or(10_000) };
            let x = cfg.simulate.x.clone().unwrap_or_else(|| vec![1.0; dim]);
            let diffusion = || -> Result<Diffusion> {
                match cfg.simulate.potential.as_deref().unwrap_or("u_alpha") {
                    "u_alpha" => Diffusion::u_alpha(alpha, dim),
                    "quadratic" => Diffusion::quadratic(dim),
                    o => Err(Error::Config(format!("`simulate.potential`: unknown potential {o:?}"))),
                }
            };
            match what.as_str() {
                "weight" => {
                    let d = diffusion()?;
                    let p = WellMethodParams::standard(alpha, dim)?;
                    let rows: Result<Vec<Value>> = ts
                        .iter()
                        .map(|&t| Ok(json!({"t": t, "estimate": feynman_kac_weight(&d, &x, t, &batch)?, "envelope": well_envelope(&p, &x, t)})))
                        .collect();
                    ("E[M_t] <= e^{ct}(e^{-t G((1-beta)U)} + e^{-beta U})".to_string(), json!({"x": x, "batch": batch, "rows": rows?}))
                }
                "pt" => {
                    let d = diffusion()?;
                    let rows: Result<Vec<Value>> =
                        ts.iter().map(|&t| Ok(json!({"t": t, "estimate": simulate_pt(&d, &|y: &[f64]| y[0], &x, t, &batch)?}))).collect();
                    ("P_t f(x) by weighted Brownian paths and by Euler-Maruyama".to_string(), json!({"x": x, "f": "x_1", "batch": batch, "rows": rows?}))
                }
                "threshold" => {
                    let t = integrability_threshold(alpha, Psi::critical(alpha), 0.01, 10.0)?;
                    ("integrability of psi(e^{|x|^alpha}) e^{-d t |x|^{2(alpha-1)}}".to_string(), json!({"alpha": alpha, "t_star": t, "inverse_alpha_squared": 1.0 / (alpha * alpha)}))
                }
                "hyperbound" => {
                    let pair = YoungPair::new(YoungFunction::example_pair_generator(alpha)?)?;
                    let tests = default_test_set(alpha);
                    let rows: Result<Vec<Value>> = ts
                        .iter()
                        .map(|&t| Ok(to_value(&empirical_hyperboundedness(alpha, &pair, t, &batch, cfg.points(32), &tests)?)))
                        .collect();
                    ("N_tau(P_t f) / ||f||_2 on a test set".to_string(), json!({"alpha": alpha, "tables": rows?}))
                }
                _ => return Err(Error::Config(format!("`simulate.what`: unknown task {what:?}"))),
            }
        }
        Command::Concentration => {
            let alpha = cfg.family.alpha.unwrap_or(1.5);
            let phi = ConvexRate::power(alpha, cfg.concentration.coeff.unwrap_or(1.0));
            let sc = selfconsistency_cc(&phi)?;
            let env = convex_rate_envelope(&phi, sc.c_t_upper)?;
            let tails: Vec<Value> = cfg.concentration.t.clone().unwrap_or_else(|| vec![1.0, 2.0, 4.0, 8.0]).iter().map(|&t| to_value(&env.tail_bound(t))).collect();
            ("generalized Beckner inequality with T from Phi implies Phi-type tails".to_string(), json!({"report": sc, "tails": tails}))
        }
        Command::Isoperimetry => {
            let alpha = check_alpha(cfg.family.alpha.unwrap_or(1.5))?;
            let r = dimension_free_for_nu_alpha(alpha)?;
            if cfg.output.csv.is_some() {
                csv = Some(profile_csv(alpha, r.k, cfg.points(101))?);
            }
            (
                "I_{nu_alpha^n}(t) >= K L_alpha(t) in every dimension".to_string(),
                json!({"report": r, "cheeger_lower_at_half": cheeger_lower(r.c_p, 0.5)}),
            )
        }
        Command::Oracle => {
            convention = fo::CONVENTION.into();
            let seed = cfg.seed();
            let space = parse_space(&cfg.oracle.space.clone().unwrap_or_else(|| "random:6".into()), seed)?;
            let task = cfg.oracle.task.clone().unwrap_or_else(|| "poincare".into());
            let corpus = cfg.oracle.corpus.unwrap_or(2000);
            let growth = || parse_growth(&cfg.family.growth.clone().unwrap_or_else(|| "log_beta:1".into()));
            let r = match task.as_str() {
                "capacity" => to_value(&fo::capacity(&space, &need(&cfg.oracle.a, "oracle.a")?, &need(&cfg.oracle.omega, "oracle.omega")?)?),
                "capacity_mu" => to_value(&fo::capacity_mu(&space, &need(&cfg.oracle.a, "oracle.a")?)?),
                "poincare" => to_value(&fo::poincare_exact(&space)?),
                "hardy" => to_value(&fo::verify_hardy_reduction(&space, &need(&cfg.oracle.omega, "oracle.omega")?, cfg.oracle.rho.unwrap_or_else(fo::golden_rho))?),
                "fsobcap" => to_value(&fo::verify_fsobcap(&space, &growth()?, None, corpus, seed)?),
                "tensor" => to_value(&fo::verify_tensorization(&space, &space, Phi::Entropy, corpus, seed)?),
                "rothaus" => to_value(&fo::rothaus_deficit(&space, &parse_growth(&cfg.family.growth.clone().unwrap_or_else(|| "log".into()))?, corpus, seed)?),
                "tighten" => {
                    let rho = cfg.oracle.rho.unwrap_or(2.0);
                    to_value(&fo::tighten_check(&space, &FGrowth::LogPlus { shift: rho * rho }, rho, corpus, seed)?)
                }
                _ => return Err(Error::Config(format!("`oracle.task`: unknown task {task:?}"))),
            };
            (format!("finite-space check: {task}"), json!({"space": space, "task": task, "result": r}))
        }
        Command::Verify => {
            let level: SuiteLevel = cfg.verify.level.as_deref().unwrap_or("quick").parse()?;
            let mut opts = SuiteOptions::new(level, cfg.seed());
            if let Some(f) = &cfg.verify.inject {
                opts.fault = Some(f.parse::<Fault>()?);
            }
            let ids = cfg.verify.criteria.clone().unwrap_or_else(|| (1..=15).collect());
            let rep = verify_criteria(&opts, &ids);
            if rep.failed > 0 {
                exit_code = 2;
            }
            convention = "see each criterion".into();
            ("acceptance battery".to_string(), to_value(&rep))
        }
    };
    Ok(RunOutput { report: Report { schema: SCHEMA.into(), command, config: cfg, basis, convention, result }, csv, exit_code })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_is_named() {
        let e = RunConfig::from_toml("command = \"measure\"\n[measure]\nspecc = \"gaussian\"\n").unwrap_err();
        assert!(e.to_string().contains("specc"), "{e}");
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig::from_toml("command = \"criteria\"\nseed = 3\n[family]\nname = \"rosen\"\n").unwrap();
        let flags = RunConfig { seed: Some(9), ..Default::default() };
        let c = file.merge(&flags);
        assert_eq!(c.seed, Some(9));
        assert_eq!(c.family.name.as_deref(), Some("rosen"));
    }

    #[test]
    fn rosen_auto_beta_on_nu_alpha() {
        let cfg = RunConfig::from_toml("command = \"criteria\"\nseed = 1\n[measure]\nspec = \"nu_alpha:1.5\"\n[family]\nname = \"rosen\"\nbeta = \"auto\"\n").unwrap();
        let out = run(cfg).unwrap();
        let r = &out.report.result;
        assert!((r["extras"]["beta"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(r["extras"]["K_times_D"].as_f64().unwrap() > 0.0);
        assert_eq!(out.report.config.family.name.as_deref(), Some("rosen"));
    }

    #[test]
    fn identical_configs_give_identical_bytes() {
        let text = "command = \"oracle\"\nseed = 4\n[oracle]\ntask = \"hardy\"\nspace = \"random:6\"\nomega = [0, 1, 2]\n";
        let a = run(RunConfig::from_toml(text).unwrap()).unwrap().report.to_json();
        let b = run(RunConfig::from_toml(text).unwrap()).unwrap().report.to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn measure_specs() {
        assert!(parse_measure("nu_alpha:1.5", None).is_ok());
        assert!(matches!(parse_measure("nu_alpha:3", None), Err(Error::Config(_))));
        assert!(matches!(parse_measure("cauchy", None), Err(Error::Config(_))));
        assert!(matches!(parse_growth("f_alpha:1.5"), Ok(FGrowth::FAlpha { .. })));
    }

    #[test]
    fn hypothesis_violations_exit_two() {
        assert_eq!(exit_code_for(&Error::UnboundedSupremum("x".into())), 2);
        assert_eq!(exit_code_for(&Error::Config("x".into())), 1);
    }
}
