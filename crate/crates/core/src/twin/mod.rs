//! The quantum twin: one qubit per component, the structure function as a
//! reversible oracle, reliability read from the output qubit.
//!
//! Register layout (low to high): component qubits `0..N` in model order,
//! work ancillas (tree oracles only), the output qubit, then the phase
//! register used by amplitude estimation.

mod amplify;
mod compare;
mod oracle;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateStats};
use crate::classical::ClassicalError;
use crate::relmodel::ReliabilityModel;
use crate::statevec::{self, NoiseModel, NoisyOutcome, SimError, StateVector, DEFAULT_QUBIT_CAP};

pub use amplify::{
    controlled_grover, grover_operator, grover_success_probability, modal_error_bound, qae, qae_circuit,
    qae_final_state, qae_with_cap, qft, AmplitudeEstimate, QaeReadout,
};
pub use compare::{sample_complexity_compare, CompareOptions, Comparison, ComparisonRow, QaeSweepPoint};
pub use oracle::{ancillas_required, synthesize_oracle};

/// Largest model the minterm backend will expand.
pub const MINTERM_MAX_COMPONENTS: usize = 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwinError {
    #[error("availability {0} is outside [0, 1]")]
    Availability(f64),
    #[error("{backend} oracle cannot encode this structure: {reason}")]
    Unsupported { backend: OracleBackend, reason: String },
    #[error("tree oracle needs {needed} work ancillas but the layout provides {available}")]
    AncillaBudget { needed: usize, available: usize },
    #[error("resource limit: {requested} qubits requested, at most {permitted} permitted")]
    Resource { requested: usize, permitted: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("resource limit: Monte Carlo did not reach error {target} within {max_shots} shots")]
    ShotLimit { target: f64, max_shots: u64 },
    #[error(transparent)]
    Sim(SimError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error("{0}")]
    Invalid(String),
}

impl From<SimError> for TwinError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Resource { requested, permitted } => TwinError::Resource { requested, permitted },
            other => TwinError::Sim(other),
        }
    }
}

/// How the structure function becomes gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleBackend {
    /// AND as a multi-controlled X into a fresh ancilla, OR by De Morgan,
    /// NOT by X; ancillas uncomputed by the mirrored sequence.
    Tree,
    /// One multi-controlled X per satisfying component state.
    Minterm,
    /// A single predicate-oracle gate (not a hardware gate).
    Semantic,
}

impl OracleBackend {
    pub const ALL: [OracleBackend; 3] = [OracleBackend::Tree, OracleBackend::Minterm, OracleBackend::Semantic];

    pub fn as_str(self) -> &'static str {
        match self {
            OracleBackend::Tree => "tree",
            OracleBackend::Minterm => "minterm",
            OracleBackend::Semantic => "semantic",
        }
    }

    pub fn supports(self, model: &ReliabilityModel) -> bool {
        self.check_supports(model).is_ok()
    }
}

impl fmt::Display for OracleBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for OracleBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tree" => Ok(OracleBackend::Tree),
            "minterm" => Ok(OracleBackend::Minterm),
            "semantic" => Ok(OracleBackend::Semantic),
            other => Err(format!("unknown oracle backend \"{other}\"")),
        }
    }
}

/// Qubit register map of a twin circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinLayout {
    pub component_qubits: Vec<usize>,
    pub work_ancillas: Vec<usize>,
    pub output_qubit: usize,
    pub phase_register: Vec<usize>,
    pub total_qubits: usize,
}

impl TwinLayout {
    pub fn new(components: usize, ancillas: usize, phase_qubits: usize) -> Self {
        let output_qubit = components + ancillas;
        TwinLayout {
            component_qubits: (0..components).collect(),
            work_ancillas: (components..output_qubit).collect(),
            output_qubit,
            phase_register: (output_qubit + 1..output_qubit + 1 + phase_qubits).collect(),
            total_qubits: output_qubit + 1 + phase_qubits,
        }
    }

    /// Qubits acted on by the twin circuit A (everything but the phase register).
    pub fn a_register(&self) -> Vec<usize> {
        (0..=self.output_qubit).collect()
    }

    pub fn a_width(&self) -> usize {
        self.output_qubit + 1
    }
}

/// `θ = 2·arcsin(√p)`, so that `RY(θ)|0⟩` measures 1 with probability `p`.
pub fn encode_availability(p: f64) -> Result<f64, TwinError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(TwinError::Availability(p));
    }
    Ok(2.0 * p.sqrt().asin())
}

/// One RY per component qubit, on a register of `width` qubits.
pub fn build_state_prep(model: &ReliabilityModel, width: usize) -> Result<Circuit, TwinError> {
    let mut c = Circuit::new(width);
    for (i, comp) in model.components().iter().enumerate() {
        c.append(Gate::RY {
            target: i,
            angle: encode_availability(comp.availability)?,
        })?;
    }
    Ok(c)
}

/// A built twin: the circuit `A = oracle ∘ state_prep` and its layout.
#[derive(Debug, Clone)]
pub struct Twin {
    pub circuit: Circuit,
    pub layout: TwinLayout,
    pub backend: OracleBackend,
}

impl Twin {
    pub fn stats(&self) -> GateStats {
        self.circuit.stats()
    }

    pub fn is_semantic(&self) -> bool {
        self.circuit.contains_predicate_oracle()
    }

    /// `A|0…0⟩`.
    pub fn prepare(&self) -> Result<StateVector, TwinError> {
        let s = StateVector::init_zero(self.circuit.num_qubits())?;
        Ok(statevec::run(&self.circuit, s)?)
    }
}

pub fn build_twin(model: &ReliabilityModel, backend: OracleBackend) -> Result<Twin, TwinError> {
    build_twin_with(model, backend, 0, DEFAULT_QUBIT_CAP)
}

/// Twin whose layout reserves `phase_qubits` above the output qubit. The
/// circuit itself spans only the A register.
pub fn build_twin_with(
    model: &ReliabilityModel,
    backend: OracleBackend,
    phase_qubits: usize,
    cap: usize,
) -> Result<Twin, TwinError> {
    let ancillas = ancillas_required(model, backend)?;
    let layout = TwinLayout::new(model.n(), ancillas, phase_qubits);
    if layout.total_qubits > cap {
        return Err(TwinError::Resource {
            requested: layout.total_qubits,
            permitted: cap,
        });
    }
    let oracle_layout = TwinLayout::new(model.n(), ancillas, 0);
    let prep = build_state_prep(model, oracle_layout.total_qubits)?;
    let oracle = synthesize_oracle(model, backend, &oracle_layout)?;
    Ok(Twin {
        circuit: prep.compose(&oracle)?,
        layout,
        backend,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactAssessment {
    pub reliability: f64,
    pub qubits: usize,
    pub stats: GateStats,
    pub semantic_oracle: bool,
}

/// Simulates `A|0…0⟩` once and reads `P(output = 1)`.
pub fn assess_exact(model: &ReliabilityModel, backend: OracleBackend) -> Result<ExactAssessment, TwinError> {
    let twin = build_twin(model, backend)?;
    let state = twin.prepare()?;
    Ok(ExactAssessment {
        reliability: state.marginal_probability(twin.layout.output_qubit, true)?,
        qubits: twin.layout.total_qubits,
        stats: twin.stats(),
        semantic_oracle: twin.is_semantic(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingAssessment {
    pub estimate: f64,
    pub stderr: f64,
    pub shots: u64,
    pub seed: u64,
    pub qubits: usize,
    pub stats: GateStats,
    pub semantic_oracle: bool,
}

/// Measures the output qubit `shots` times.
pub fn assess_sampling(
    model: &ReliabilityModel,
    backend: OracleBackend,
    shots: u64,
    seed: u64,
) -> Result<SamplingAssessment, TwinError> {
    if shots == 0 {
        return Err(TwinError::Invalid("shots must be at least 1".into()));
    }
    let twin = build_twin(model, backend)?;
    let state = twin.prepare()?;
    let counts = state.sample(&[twin.layout.output_qubit], shots, seed)?;
    let estimate = counts.frequency("1");
    Ok(SamplingAssessment {
        estimate,
        stderr: (estimate * (1.0 - estimate) / shots as f64).sqrt(),
        shots,
        seed,
        qubits: twin.layout.total_qubits,
        stats: twin.stats(),
        semantic_oracle: twin.is_semantic(),
    })
}

/// Output marginal of the twin under depolarizing noise.
pub fn assess_noisy(
    model: &ReliabilityModel,
    backend: OracleBackend,
    noise: NoiseModel,
    seed: u64,
) -> Result<(Twin, NoisyOutcome), TwinError> {
    let twin = build_twin(model, backend)?;
    let outcome = statevec::run_noisy(&twin.circuit, noise, twin.layout.output_qubit, seed)?;
    Ok((twin, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relmodel::{ComponentSpec, Structure};

    fn model(ps: &[f64], s: Structure) -> ReliabilityModel {
        let c = ps
            .iter()
            .enumerate()
            .map(|(i, &p)| ComponentSpec {
                id: format!("c{i}"),
                availability: p,
                capacity: None,
            })
            .collect();
        ReliabilityModel::new(c, s).unwrap()
    }

    fn leaves(ix: &[usize]) -> Vec<Structure> {
        ix.iter().map(|&i| Structure::Component(i)).collect()
    }

    #[test]
    fn encoding_angles() {
        assert_eq!(encode_availability(0.0).unwrap(), 0.0);
        assert!((encode_availability(0.5).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((encode_availability(1.0).unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!(encode_availability(-0.1).is_err());
        assert!(encode_availability(1.1).is_err());
    }

    #[test]
    fn state_prep_product_law() {
        let m = model(&[0.9, 0.9], Structure::And(leaves(&[0, 1])));
        let prep = build_state_prep(&m, 2).unwrap();
        let p = statevec::run(&prep, StateVector::init_zero(2).unwrap())
            .unwrap()
            .probabilities();
        for (i, want) in [0.01, 0.09, 0.09, 0.81].iter().enumerate() {
            assert!((p[i] - want).abs() < 1e-12, "{i}: {}", p[i]);
        }
        let m = model(&[1.0, 1.0, 1.0], Structure::And(leaves(&[0, 1, 2])));
        let prep = build_state_prep(&m, 3).unwrap();
        let p = statevec::run(&prep, StateVector::init_zero(3).unwrap())
            .unwrap()
            .probabilities();
        assert!((p[7] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn and_tree_restores_ancilla() {
        let m = model(&[0.5, 0.5], Structure::And(leaves(&[0, 1])));
        let twin = build_twin(&m, OracleBackend::Tree).unwrap();
        assert_eq!(twin.layout.work_ancillas, vec![2]);
        assert_eq!(twin.layout.output_qubit, 3);
        let oracle = synthesize_oracle(&m, OracleBackend::Tree, &TwinLayout::new(2, 1, 0)).unwrap();
        let s = statevec::run(&oracle, StateVector::basis(4, 0b0011).unwrap()).unwrap();
        assert!((s.amplitudes()[0b1011].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kofn_semantic_and_tree_rejection() {
        let m = model(
            &[0.9; 3],
            Structure::KOfN {
                k: 2,
                of: leaves(&[0, 1, 2]),
            },
        );
        let layout = TwinLayout::new(3, 0, 0);
        let oracle = synthesize_oracle(&m, OracleBackend::Semantic, &layout).unwrap();
        let s = statevec::run(&oracle, StateVector::basis(4, 0b0011).unwrap()).unwrap();
        assert!((s.marginal_probability(3, true).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            synthesize_oracle(&m, OracleBackend::Tree, &layout),
            Err(TwinError::Unsupported {
                backend: OracleBackend::Tree,
                ..
            })
        ));
    }

    #[test]
    fn ancilla_budget_checked() {
        let m = model(&[0.5, 0.5], Structure::And(leaves(&[0, 1])));
        assert_eq!(
            synthesize_oracle(&m, OracleBackend::Tree, &TwinLayout::new(2, 0, 0)),
            Err(TwinError::AncillaBudget {
                needed: 1,
                available: 0
            })
        );
    }

    #[test]
    fn minterm_limit() {
        let n = MINTERM_MAX_COMPONENTS + 1;
        let m = model(&vec![0.5; n], Structure::And(leaves(&(0..n).collect::<Vec<_>>())));
        assert!(!OracleBackend::Minterm.supports(&m));
        assert!(OracleBackend::Tree.supports(&m));
    }

    #[test]
    fn not_and_contradiction_paths() {
        // NOT(a) AND a is never satisfied; OR(NOT a, b) is a → b.
        let s = Structure::Or(vec![
            Structure::And(vec![
                Structure::Not(Box::new(Structure::Component(0))),
                Structure::Component(0),
            ]),
            Structure::Or(vec![
                Structure::Not(Box::new(Structure::Component(0))),
                Structure::Component(1),
            ]),
        ]);
        let m = model(&[0.3, 0.6], s);
        let exact = crate::classical::exact_reliability(&m).unwrap().reliability;
        for b in OracleBackend::ALL {
            let r = assess_exact(&m, b).unwrap().reliability;
            assert!((r - exact).abs() < 1e-12, "{b}: {r} vs {exact}");
        }
        // a single negated leaf as the whole structure
        let m = model(&[0.3], Structure::Not(Box::new(Structure::Component(0))));
        let r = assess_exact(&m, OracleBackend::Tree).unwrap().reliability;
        assert!((r - 0.7).abs() < 1e-12);
    }

    #[test]
    fn backend_names_round_trip() {
        for b in OracleBackend::ALL {
            assert_eq!(b.as_str().parse::<OracleBackend>().unwrap(), b);
        }
        assert!("adder".parse::<OracleBackend>().is_err());
    }

    #[test]
    fn sampling_certain_model() {
        let m = model(&[1.0, 1.0], Structure::Series(leaves(&[0, 1])));
        let r = assess_sampling(&m, OracleBackend::Tree, 1000, 4).unwrap();
        assert_eq!((r.estimate, r.stderr), (1.0, 0.0));
    }

    #[test]
    fn resource_cap() {
        let m = model(&[0.5; 3], Structure::And(leaves(&[0, 1, 2])));
        assert!(matches!(
            build_twin_with(&m, OracleBackend::Semantic, 30, DEFAULT_QUBIT_CAP),
            Err(TwinError::Resource {
                requested: 34,
                permitted: 26
            })
        ));
    }
}
