//! Reliability assessment of component systems on a simulated quantum
//! register.
//!
//! Each component's availability is loaded into one qubit, the system's
//! structure function becomes a reversible oracle writing success into an
//! output qubit, and reliability is read from that qubit by exact
//! simulation, sampling, Grover amplification or amplitude estimation.
//! Exact enumeration and seeded Monte Carlo serve as classical baselines.
//!
//! ```
//! use quantum_twin::relmodel::parse_model;
//! use quantum_twin::twin::{assess_exact, OracleBackend};
//! use quantum_twin::classical::exact_reliability;
//!
//! let model = parse_model(r#"{
//!     "components": [
//!         {"id": "g1", "availability": 0.9},
//!         {"id": "g2", "availability": 0.9},
//!         {"id": "g3", "availability": 0.9}
//!     ],
//!     "structure": {"type": "kofn", "k": 2, "of": ["g1", "g2", "g3"]}
//! }"#).unwrap();
//! let quantum = assess_exact(&model, OracleBackend::Semantic).unwrap().reliability;
//! let classical = exact_reliability(&model).unwrap().reliability;
//! assert!((quantum - classical).abs() < 1e-12);
//! ```
//!
//! See `examples/` for one runnable program per capability.

pub mod circuit;
pub mod classical;
pub mod cli;
pub mod models;
pub mod relmodel;
pub mod rng;
pub mod statevec;
pub mod twin;
