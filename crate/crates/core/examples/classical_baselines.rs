//! Exact enumeration, seeded Monte Carlo with a 95% interval, and the
//! `1/√shots` convergence of the Monte Carlo error.

use quantum_twin::classical::{convergence_sweep, exact_reliability, monte_carlo};
use quantum_twin::models;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = models::load("bridge-5").expect("bundled model");
    let exact = exact_reliability(&model)?;
    println!(
        "exact R = {:.6} over {} states",
        exact.reliability, exact.states_enumerated
    );

    let mc = monte_carlo(&model, 10_000, 42)?;
    println!(
        "monte carlo 10^4 shots: {:.5} ± {:.5}  CI95 [{:.5}, {:.5}]  covers truth: {}",
        mc.estimate,
        mc.stderr,
        mc.ci95.0,
        mc.ci95.1,
        mc.covers(exact.reliability)
    );

    let sweep = convergence_sweep(&model, &[100, 1_000, 10_000, 100_000], 25, 1)?;
    for row in &sweep.rows {
        println!("{:>7} shots: median |error| = {:.2e}", row.shots, row.median_abs_error);
    }
    println!("log-log slope = {:.3}", sweep.slope);
    Ok(())
}
