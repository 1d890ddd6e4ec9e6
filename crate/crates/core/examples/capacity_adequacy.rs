//! Generation adequacy: a capacity-threshold model evaluated classically and
//! through the semantic-oracle twin, with loss-of-load probability.

use quantum_twin::classical::exact_reliability;
use quantum_twin::models;
use quantum_twin::relmodel::ComponentState;
use quantum_twin::twin::{assess_exact, qae, OracleBackend, QaeReadout};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = models::load("gens-capacity-3").expect("bundled model");
    println!("{model}");
    for mask in 0..1u64 << model.n() {
        let state = ComponentState::from_mask(mask, model.n());
        let online: f64 = (0..model.n())
            .filter(|&i| state.is_up(i))
            .fold(0.0, |acc, i| acc + model.capacities()[i]);
        println!(
            "  state {:03b}  online {:>5} MW  adequate {:<5}  P = {:.6}",
            mask,
            online,
            model.evaluate(&state),
            model.state_probability(&state)
        );
    }
    let exact = exact_reliability(&model)?;
    let twin = assess_exact(&model, OracleBackend::Semantic)?;
    println!("exact  R = {:.6}  LOLP = {:.6}", exact.reliability, exact.lolp);
    println!(
        "twin   R = {:.6}  LOLP = {:.6}",
        twin.reliability,
        1.0 - twin.reliability
    );
    let est = qae(&model, OracleBackend::Semantic, 8, QaeReadout::Exact)?;
    println!(
        "QAE m=8 R = {:.6}  ({} oracle queries)",
        est.estimate, est.oracle_queries
    );
    Ok(())
}
