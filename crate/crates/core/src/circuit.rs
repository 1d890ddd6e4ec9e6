//! Reversible-gate circuit IR.
//!
//! Conventions shared by every module: qubit 0 is the least-significant bit of
//! a basis-state index, and
//! `RY(θ) = [[cos(θ/2), −sin(θ/2)], [sin(θ/2), cos(θ/2)]]`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::relmodel::{ReliabilityModel, Structure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate {gate} touches qubit {qubit}, but the circuit has {num_qubits} qubits")]
    IndexOutOfRange {
        gate: &'static str,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("gate {gate} uses qubit {qubit} more than once")]
    RepeatedQubit { gate: &'static str, qubit: usize },
    #[error("gate {gate}: {msg}")]
    Malformed { gate: &'static str, msg: String },
    #[error("cannot compose a {left}-qubit circuit with a {right}-qubit circuit")]
    QubitCountMismatch { left: usize, right: usize },
}

/// A structure function packaged as a classical predicate over an ordered set
/// of input qubits. Input `i` of the predicate is component `i`.
pub struct Predicate {
    arity: usize,
    structure: Structure,
    capacities: Vec<f64>,
    truth: OnceLock<Vec<bool>>,
}

impl Predicate {
    /// `capacities` feeds capacity-threshold nodes and may be empty when the
    /// structure has none.
    pub fn new(arity: usize, structure: Structure, capacities: Vec<f64>) -> Self {
        Predicate {
            arity,
            structure,
            capacities,
            truth: OnceLock::new(),
        }
    }

    pub fn from_model(model: &ReliabilityModel) -> Self {
        Predicate::new(model.n(), model.structure().clone(), model.capacities().to_vec())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn eval(&self, x: u64) -> bool {
        self.structure.eval_mask(x, &self.capacities)
    }

    /// Lazily built truth table over all `2^arity` inputs.
    pub fn truth_table(&self) -> &[bool] {
        self.truth
            .get_or_init(|| (0..1u64 << self.arity()).map(|x| self.eval(x)).collect())
    }
}

impl Clone for Predicate {
    fn clone(&self) -> Self {
        Predicate::new(self.arity, self.structure.clone(), self.capacities.clone())
    }
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.structure == other.structure && self.capacities == other.capacities
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Predicate")
            .field("arity", &self.arity())
            .field("structure", &self.structure)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    RY {
        target: usize,
        angle: f64,
    },
    X(usize),
    Y(usize),
    Z(usize),
    H(usize),
    Phase {
        target: usize,
        angle: f64,
    },
    CX {
        control: usize,
        target: usize,
    },
    CCX {
        c1: usize,
        c2: usize,
        target: usize,
    },
    MCX {
        controls: Vec<usize>,
        target: usize,
    },
    /// Phase flip on the basis states where every listed qubit is 1.
    MCZ(Vec<usize>),
    Swap(usize, usize),
    CPhase {
        control: usize,
        target: usize,
        angle: f64,
    },
    /// `|x⟩|b⟩ → |x⟩|b ⊕ φ(x)⟩` with `x` read from `inputs` (input 0 is the low bit).
    PredicateOracle {
        inputs: Vec<usize>,
        target: usize,
        predicate: Arc<Predicate>,
    },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::RY { .. } => "RY",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::H(_) => "H",
            Gate::Phase { .. } => "PHASE",
            Gate::CX { .. } => "CX",
            Gate::CCX { .. } => "CCX",
            Gate::MCX { .. } => "MCX",
            Gate::MCZ(_) => "MCZ",
            Gate::Swap(..) => "SWAP",
            Gate::CPhase { .. } => "CPHASE",
            Gate::PredicateOracle { .. } => "PREDICATE",
        }
    }

    /// Every qubit the gate touches, controls first, target last.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::RY { target, .. } | Gate::Phase { target, .. } => vec![*target],
            Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::H(q) => vec![*q],
            Gate::CX { control, target } | Gate::CPhase { control, target, .. } => {
                vec![*control, *target]
            }
            Gate::CCX { c1, c2, target } => vec![*c1, *c2, *target],
            Gate::MCX { controls, target } => controls.iter().copied().chain(std::iter::once(*target)).collect(),
            Gate::MCZ(qs) => qs.clone(),
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::PredicateOracle { inputs, target, .. } => {
                inputs.iter().copied().chain(std::iter::once(*target)).collect()
            }
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::RY { angle, .. } | Gate::Phase { angle, .. } | Gate::CPhase { angle, .. } => Some(*angle),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::RY { target, angle } => Gate::RY {
                target: *target,
                angle: -angle,
            },
            Gate::Phase { target, angle } => Gate::Phase {
                target: *target,
                angle: -angle,
            },
            Gate::CPhase { control, target, angle } => Gate::CPhase {
                control: *control,
                target: *target,
                angle: -angle,
            },
            other => other.clone(),
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<(), CircuitError> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= num_qubits {
                return Err(CircuitError::IndexOutOfRange {
                    gate: self.name(),
                    qubit: q,
                    num_qubits,
                });
            }
            if qs[..i].contains(&q) {
                return Err(CircuitError::RepeatedQubit {
                    gate: self.name(),
                    qubit: q,
                });
            }
        }
        match self {
            Gate::MCZ(qs) if qs.is_empty() => Err(CircuitError::Malformed {
                gate: "MCZ",
                msg: "needs at least one qubit".into(),
            }),
            Gate::PredicateOracle { inputs, predicate, .. } if inputs.len() != predicate.arity() => {
                Err(CircuitError::Malformed {
                    gate: "PREDICATE",
                    msg: format!(
                        "{} inputs wired to a predicate over {} components",
                        inputs.len(),
                        predicate.arity()
                    ),
                })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        for (i, q) in self.qubits().iter().enumerate() {
            let sep = if i == 0 { ' ' } else { ',' };
            write!(f, "{sep}q[{q}]")?;
        }
        if let Some(angle) = self.angle() {
            write!(f, " ({angle})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn append(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Gates of `self` followed by gates of `other`.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        let mut out = self.clone();
        out.extend(other)?;
        Ok(out)
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.num_qubits != self.num_qubits {
            return Err(CircuitError::QubitCountMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Copy of the circuit on a wider register; qubit indices are unchanged.
    pub fn widened(&self, num_qubits: usize) -> Circuit {
        assert!(num_qubits >= self.num_qubits);
        Circuit {
            num_qubits,
            gates: self.gates.clone(),
        }
    }

    pub fn contains_predicate_oracle(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::PredicateOracle { .. }))
    }

    pub fn stats(&self) -> GateStats {
        let mut stats = GateStats {
            qubits: self.num_qubits,
            ..GateStats::default()
        };
        for g in &self.gates {
            if let Gate::PredicateOracle { .. } = g {
                stats.predicate_oracles += 1;
            } else {
                *stats.counts.entry(g.name()).or_default() += 1;
                stats.total += 1;
            }
        }
        stats
    }

    /// Line-oriented text dump: `qubits: n` header, then one gate per line.
    pub fn dump(&self) -> String {
        let mut out = format!("qubits: {}\n", self.num_qubits);
        for g in &self.gates {
            writeln!(out, "{g}").unwrap();
        }
        out
    }
}

/// Gate tallies. Predicate oracles are not hardware gates and are excluded
/// from `counts` and `total`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GateStats {
    pub counts: BTreeMap<&'static str, usize>,
    pub total: usize,
    pub predicate_oracles: usize,
    pub qubits: usize,
}

impl GateStats {
    pub fn count(&self, name: &str) -> usize {
        self.counts.get(name).copied().unwrap_or(0)
    }
}
