//! Depolarizing noise on the bridge twin, averaged over seeded trajectories.

use quantum_twin::classical::exact_reliability;
use quantum_twin::models;
use quantum_twin::statevec::NoiseModel;
use quantum_twin::twin::{assess_noisy, OracleBackend};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = models::load("bridge-5").expect("bundled model");
    let truth = exact_reliability(&model)?.reliability;
    println!("exact R = {truth:.6}");
    for backend in [OracleBackend::Semantic, OracleBackend::Tree] {
        for lambda in [0.0, 0.001, 0.01, 0.05] {
            let (_, out) = assess_noisy(&model, backend, NoiseModel::new(lambda, 2_000)?, 11)?;
            println!(
                "{backend:<8} lambda = {lambda:<5}  R = {:.5} ± {:.5}  |error| = {:.2e}",
                out.mean,
                out.stderr,
                (out.mean - truth).abs()
            );
        }
    }
    Ok(())
}
