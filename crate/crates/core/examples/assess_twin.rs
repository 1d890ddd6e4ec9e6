//! Encode each bundled model as a quantum twin and compare the exact
//! output-qubit probability with classical enumeration.

use quantum_twin::classical::exact_reliability;
use quantum_twin::models;
use quantum_twin::twin::{assess_exact, encode_availability, OracleBackend};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, model) in models::all() {
        let truth = exact_reliability(&model)?;
        println!(
            "{name}: {} components, exact R = {:.10}, LOLP = {:.3e}",
            model.n(),
            truth.reliability,
            truth.lolp
        );
        for c in model.components().iter().take(3) {
            println!(
                "  {:<5} p = {:.3}  RY angle = {:.6}",
                c.id,
                c.availability,
                encode_availability(c.availability)?
            );
        }
        for backend in OracleBackend::ALL {
            if !backend.supports(&model) {
                println!("  {backend:<8} unsupported for this structure");
                continue;
            }
            let twin = assess_exact(&model, backend)?;
            println!(
                "  {backend:<8} R = {:.10}  |diff| = {:.1e}  qubits = {:>2}  gates = {}",
                twin.reliability,
                (twin.reliability - truth.reliability).abs(),
                twin.qubits,
                twin.stats.total
            );
        }
    }
    Ok(())
}
