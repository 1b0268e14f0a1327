//! Runs the acceptance battery at the quick level and prints one line per criterion.
use hyperineq::verify::{verify_suite, SuiteLevel, SuiteOptions};

fn main() {
    let criteria: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let opts = SuiteOptions::new(SuiteLevel::Quick, 20240);
    let report = if criteria.is_empty() { verify_suite(&opts) } else { hyperineq::verify::verify_criteria(&opts, &criteria) };
    for r in &report.results {
        println!("{}", r.line());
    }
    println!("{} passed, {} failed", report.passed, report.failed);
}
