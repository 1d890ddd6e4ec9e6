//! Grover iterations on a twin follow `sin²((2k+1)·arcsin√a)`.

use quantum_twin::models;
use quantum_twin::twin::{build_twin, grover_success_probability, OracleBackend};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = models::load("series-2").expect("bundled model");
    let twin = build_twin(&model, OracleBackend::Tree)?;
    let a = grover_success_probability(&twin, 0)?;
    let theta = a.sqrt().asin();
    println!("series-2: a = {a:.6}, theta = {theta:.6}");
    println!("{:>2} {:>12} {:>12}", "k", "simulated", "predicted");
    for k in 0..6 {
        let p = grover_success_probability(&twin, k)?;
        let want = ((2 * k + 1) as f64 * theta).sin().powi(2);
        println!("{k:>2} {p:>12.9} {want:>12.9}");
    }
    Ok(())
}
