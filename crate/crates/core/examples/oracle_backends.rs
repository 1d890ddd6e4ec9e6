//! The three oracle constructions for the bridge network: gate counts,
//! ancilla use, and the text dump of the smallest twin.

use quantum_twin::models;
use quantum_twin::twin::{build_twin, OracleBackend};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = models::load("bridge-5").expect("bundled model");
    for backend in OracleBackend::ALL {
        let twin = build_twin(&model, backend)?;
        let stats = twin.stats();
        println!(
            "{backend:<8} qubits = {:>2} (ancillas {})  total gates = {:>3}  MCX = {:>2}  predicate oracles = {}",
            twin.layout.total_qubits,
            twin.layout.work_ancillas.len(),
            stats.total,
            stats.count("MCX"),
            stats.predicate_oracles
        );
    }

    let tree = build_twin(&model, OracleBackend::Tree)?;
    println!("\ntree twin:\n{}", tree.circuit.dump());

    // Capacity thresholds have no AND/OR form; the tree backend refuses them.
    let gens = models::load("gens-capacity-3").expect("bundled model");
    if let Err(e) = build_twin(&gens, OracleBackend::Tree) {
        println!("gens-capacity-3 with tree: {e}");
    }
    Ok(())
}
