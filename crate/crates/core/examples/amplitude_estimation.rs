//! Amplitude estimation on the bridge network: modal error against the
//! `π/2^m + π²/4^m` bound as the phase register grows.

use std::time::Instant;

use quantum_twin::classical::{exact_reliability, loglog_slope};
use quantum_twin::models;
use quantum_twin::twin::{modal_error_bound, qae, OracleBackend, QaeReadout};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = models::load("bridge-5").expect("bundled model");
    let truth = exact_reliability(&model)?.reliability;
    println!("bridge-5 exact reliability {truth:.10}");
    println!(
        "{:>2} {:>6} {:>6} {:>12} {:>12} {:>10}",
        "m", "qubits", "y", "estimate", "abs_error", "bound"
    );

    let (mut queries, mut errors) = (Vec::new(), Vec::new());
    for m in 4..=10 {
        let t = Instant::now();
        let est = qae(&model, OracleBackend::Semantic, m, QaeReadout::Exact)?;
        let err = (est.estimate - truth).abs();
        println!(
            "{m:>2} {:>6} {:>6} {:>12.8} {:>12.3e} {:>10.3e}  ({:.2?})",
            est.layout.total_qubits,
            est.modal_outcome,
            est.estimate,
            err,
            modal_error_bound(m),
            t.elapsed()
        );
        queries.push(est.oracle_queries as f64);
        errors.push(err);
    }
    println!(
        "log-log slope of error vs queries: {:.3}",
        loglog_slope(&queries, &errors)
    );

    // Seeded finite-shot read-out of the phase register.
    let sampled = qae(
        &model,
        OracleBackend::Semantic,
        6,
        QaeReadout::Sampled { shots: 1000, seed: 7 },
    )?;
    println!(
        "m=6 sampled (1000 shots): y={} estimate={:.6} modal frequency={:.3}",
        sampled.modal_outcome, sampled.estimate, sampled.modal_weight
    );
    Ok(())
}
