//! Acceptance battery, one test per criterion.
//!
//! Each test prints a single `[PASS]` or `[FAIL]` line. Set `HYPERINEQ_SEED`
//! to change the seed; the default is 20240.

use hyperineq::verify::{run_criterion, SuiteLevel, SuiteOptions};
use std::time::Instant;

fn options() -> SuiteOptions {
    let seed = std::env::var("HYPERINEQ_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20240);
    SuiteOptions::new(SuiteLevel::Full, seed)
}

fn check(id: u32, budget_secs: f64) {
    let start = Instant::now();
    let r = run_criterion(id, &options());
    let secs = start.elapsed().as_secs_f64();
    println!("{} ({secs:.1} s, budget {budget_secs} s)", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_orlicz_fixed_point() {
    check(1, 30.0);
}

#[test]
fn criterion_02_duality_sandwich() {
    check(2, 30.0);
}

#[test]
fn criterion_03_exponential_oracle() {
    check(3, 10.0);
}

#[test]
fn criterion_04_ttilde_sandwich() {
    check(4, 30.0);
}

#[test]
fn criterion_05_rosen_uniformity() {
    check(5, 120.0);
}

#[test]
fn criterion_06_gross_recovery() {
    check(6, 10.0);
}

#[test]
fn criterion_07_well_envelope() {
    check(7, 600.0);
}

#[test]
fn criterion_08_hyperboundedness_threshold() {
    check(8, 120.0);
}

#[test]
fn criterion_09_ornstein_uhlenbeck() {
    check(9, 300.0);
}

#[test]
fn criterion_10_isoperimetric_domination() {
    check(10, 120.0);
}

#[test]
fn criterion_11_cheeger_arithmetic() {
    check(11, 5.0);
}

#[test]
fn criterion_12_finite_oracle() {
    check(12, 300.0);
}

#[test]
fn criterion_13_tensorization() {
    check(13, 300.0);
}

#[test]
fn criterion_14_c1c2_certificates() {
    check(14, 10.0);
}

#[test]
fn criterion_15_determinism() {
    check(15, 3600.0);
}
