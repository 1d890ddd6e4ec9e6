//! Build a model from JSON text, inspect validation errors, and write it back.

use quantum_twin::classical::exact_reliability;
use quantum_twin::relmodel::parse_model;
use quantum_twin::twin::{assess_exact, OracleBackend};

const SUBSTATION: &str = r#"{
  "components": [
    {"id": "line_a", "availability": 0.97},
    {"id": "line_b", "availability": 0.95},
    {"id": "xfmr", "availability": 0.99},
    {"id": "bus", "availability": 0.999}
  ],
  "structure": {"type": "series", "of": [
    {"type": "parallel", "of": ["line_a", "line_b"]},
    "xfmr",
    "bus"
  ]}
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = parse_model(SUBSTATION)?;
    println!("{model}");
    println!("exact R  = {:.9}", exact_reliability(&model)?.reliability);
    println!(
        "twin (tree) R = {:.9}",
        assess_exact(&model, OracleBackend::Tree)?.reliability
    );

    for broken in [
        r#"{"components":[{"id":"g1","availability":1.2}],"structure":"g1"}"#,
        r#"{"components":[{"id":"a","availability":0.5}],"structure":{"type":"kofn","k":3,"of":["a"]}}"#,
        r#"{"components":[{"id":"a","availability":0.5}],"structure":{"type":"capacity","demand":10}}"#,
    ] {
        println!("rejected: {}", parse_model(broken).unwrap_err());
    }

    println!("\nround-tripped file:\n{}", model.to_json());
    Ok(())
}
