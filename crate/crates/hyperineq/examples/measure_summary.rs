//! Normalizes a few Boltzmann measures and prints their basic statistics.
use hyperineq::line_measure::{LineMeasure, Potential};

fn main() -> hyperineq::Result<()> {
    let cases = [
        ("gaussian", LineMeasure::new(Potential::abs_power(2.0, 0.5)?, 1.0)?),
        ("laplace", LineMeasure::new(Potential::abs_power(1.0, 1.0)?, 1.0)?),
        ("nu_1.5", LineMeasure::new(Potential::u_alpha(1.5)?, 2.0)?),
        ("m_1.5", LineMeasure::new(Potential::abs_power(1.5, 1.0)?, 1.0)?),
    ];
    println!("{:<10} {:>12} {:>12} {:>12} {:>14}", "measure", "log Z", "variance", "median", "P(X > 3)");
    for (name, m) in &cases {
        let var = m.expectation(|x| x * x);
        println!("{:<10} {:>12.6} {:>12.6} {:>12.2e} {:>14.6e}", name, m.log_z(), var, m.median(), m.upper_tail(3.0));
    }
    Ok(())
}
