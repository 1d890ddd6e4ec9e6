//! Monte Carlo shots against amplitude-estimation oracle queries for a set
//! of target errors on the bridge network.

use quantum_twin::models;
use quantum_twin::twin::{sample_complexity_compare, CompareOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = models::load("bridge-5").expect("bundled model");
    let opts = CompareOptions {
        seed: 3,
        sweep_schedule: vec![100, 1_000, 10_000, 100_000],
        qae_sweep: (4..=8).collect(),
        ..CompareOptions::default()
    };
    let cmp = sample_complexity_compare(&model, &[0.05, 0.02, 0.01, 0.005], &opts)?;
    println!("truth = {:.6}", cmp.truth);
    println!(
        "{:>7} {:>9} {:>10} {:>3} {:>8} {:>10}",
        "eps", "mc_shots", "mc_err", "m", "queries", "qae_err"
    );
    for r in &cmp.rows {
        println!(
            "{:>7} {:>9} {:>10.2e} {:>3} {:>8} {:>10.2e}",
            r.target_error,
            r.mc_shots,
            r.mc_achieved_error,
            r.qae_phase_qubits,
            r.qae_oracle_queries,
            r.qae_achieved_error
        );
    }
    println!(
        "monte carlo slope {:.3}, amplitude estimation slope {:.3}",
        cmp.mc_slope, cmp.qae_slope
    );
    Ok(())
}
