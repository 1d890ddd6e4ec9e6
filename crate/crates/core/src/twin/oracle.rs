//! Structure-function oracles: `|x⟩|0…0⟩_anc|b⟩_out → |x⟩|0…0⟩_anc|b ⊕ φ(x)⟩_out`.

use std::sync::Arc;

use crate::circuit::{Circuit, Gate, Predicate};
use crate::relmodel::{ReliabilityModel, Structure};

use super::{OracleBackend, TwinError, TwinLayout, MINTERM_MAX_COMPONENTS};

/// A qubit carrying a subexpression value, possibly complemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Literal {
    qubit: usize,
    negated: bool,
}

/// Compute half of a tree oracle: gates writing every AND/OR node into its own
/// ancilla, plus the literal holding the root value.
pub(crate) struct TreeCompute {
    gates: Vec<Gate>,
    root: Literal,
    ancillas: usize,
}

impl TreeCompute {
    pub(crate) fn ancillas(&self) -> usize {
        self.ancillas
    }
}

struct TreeSynth {
    gates: Vec<Gate>,
    next_ancilla: usize,
    first_ancilla: usize,
}

impl TreeSynth {
    fn literal(&mut self, s: &Structure) -> Result<Literal, TwinError> {
        match s {
            Structure::Component(i) => Ok(Literal {
                qubit: *i,
                negated: false,
            }),
            Structure::Not(c) => {
                let l = self.literal(c)?;
                Ok(Literal {
                    negated: !l.negated,
                    ..l
                })
            }
            Structure::And(of) | Structure::Series(of) => self.conjunction(of, false),
            // De Morgan: OR(c…) = NOT AND(NOT c…)
            Structure::Or(of) | Structure::Parallel(of) => self.conjunction(of, true),
            Structure::KOfN { .. } => Err(TwinError::Unsupported {
                backend: OracleBackend::Tree,
                reason: "kofn nodes are not AND/OR/NOT; use the minterm or semantic oracle".into(),
            }),
            Structure::Capacity { .. } => Err(TwinError::Unsupported {
                backend: OracleBackend::Tree,
                reason: "capacity thresholds need reversible arithmetic; use the semantic oracle".into(),
            }),
        }
    }

    /// AND of the children, with inputs and result complemented when
    /// `de_morgan` is set.
    fn conjunction(&mut self, of: &[Structure], de_morgan: bool) -> Result<Literal, TwinError> {
        let mut lits = Vec::with_capacity(of.len());
        for c in of {
            lits.push(self.literal(c)?);
        }
        if lits.len() == 1 {
            return Ok(lits[0]);
        }
        let mut controls: Vec<Literal> = Vec::new();
        for l in lits {
            let l = Literal {
                negated: l.negated ^ de_morgan,
                ..l
            };
            if !controls.contains(&l) {
                controls.push(l);
            }
        }
        let target = self.next_ancilla;
        self.next_ancilla += 1;
        let contradictory = controls
            .iter()
            .any(|a| controls.iter().any(|b| a.qubit == b.qubit && a.negated != b.negated));
        // x ∧ ¬x is constant false: the ancilla stays |0⟩.
        if !contradictory {
            let flips: Vec<usize> = controls.iter().filter(|l| l.negated).map(|l| l.qubit).collect();
            self.gates.extend(flips.iter().map(|&q| Gate::X(q)));
            self.gates.push(Gate::MCX {
                controls: controls.iter().map(|l| l.qubit).collect(),
                target,
            });
            self.gates.extend(flips.iter().map(|&q| Gate::X(q)));
        }
        Ok(Literal {
            qubit: target,
            negated: de_morgan,
        })
    }
}

pub(crate) fn tree_compute(structure: &Structure, n: usize) -> Result<TreeCompute, TwinError> {
    let mut synth = TreeSynth {
        gates: Vec::new(),
        next_ancilla: n,
        first_ancilla: n,
    };
    let root = synth.literal(structure)?;
    Ok(TreeCompute {
        gates: synth.gates,
        root,
        ancillas: synth.next_ancilla - synth.first_ancilla,
    })
}

/// Work ancillas the chosen backend needs for `model`.
pub fn ancillas_required(model: &ReliabilityModel, backend: OracleBackend) -> Result<usize, TwinError> {
    backend.check_supports(model)?;
    match backend {
        OracleBackend::Tree => Ok(tree_compute(model.structure(), model.n())?.ancillas()),
        OracleBackend::Minterm | OracleBackend::Semantic => Ok(0),
    }
}

/// Builds the oracle for `model` on `layout` (circuit width = `layout.total_qubits`).
pub fn synthesize_oracle(
    model: &ReliabilityModel,
    backend: OracleBackend,
    layout: &TwinLayout,
) -> Result<Circuit, TwinError> {
    backend.check_supports(model)?;
    let n = model.n();
    if layout.component_qubits.len() != n {
        return Err(TwinError::Invalid(format!(
            "layout has {} component qubits for a {n}-component model",
            layout.component_qubits.len()
        )));
    }
    let out = layout.output_qubit;
    let mut c = Circuit::new(layout.total_qubits);
    match backend {
        OracleBackend::Tree => {
            let compute = tree_compute(model.structure(), n)?;
            if compute.ancillas != layout.work_ancillas.len() {
                return Err(TwinError::AncillaBudget {
                    needed: compute.ancillas,
                    available: layout.work_ancillas.len(),
                });
            }
            for g in &compute.gates {
                c.append(g.clone())?;
            }
            c.append(Gate::CX {
                control: compute.root.qubit,
                target: out,
            })?;
            if compute.root.negated {
                c.append(Gate::X(out))?;
            }
            for g in compute.gates.iter().rev() {
                c.append(g.inverse())?;
            }
        }
        OracleBackend::Minterm => {
            let controls: Vec<usize> = (0..n).collect();
            for x in 0..1u64 << n {
                if !model.evaluate_mask(x) {
                    continue;
                }
                let zeros: Vec<usize> = (0..n).filter(|i| x >> i & 1 == 0).collect();
                for &q in &zeros {
                    c.append(Gate::X(q))?;
                }
                c.append(Gate::MCX {
                    controls: controls.clone(),
                    target: out,
                })?;
                for &q in &zeros {
                    c.append(Gate::X(q))?;
                }
            }
        }
        OracleBackend::Semantic => {
            c.append(Gate::PredicateOracle {
                inputs: (0..n).collect(),
                target: out,
                predicate: Arc::new(Predicate::from_model(model)),
            })?;
        }
    }
    Ok(c)
}

impl OracleBackend {
    pub fn check_supports(self, model: &ReliabilityModel) -> Result<(), TwinError> {
        match self {
            OracleBackend::Tree if !model.structure().is_boolean_tree() => {
                // Reuse the synthesizer's message for the offending node.
                tree_compute(model.structure(), model.n()).map(|_| ())
            }
            OracleBackend::Minterm if model.n() > MINTERM_MAX_COMPONENTS => Err(TwinError::Unsupported {
                backend: self,
                reason: format!(
                    "{} components exceed the minterm limit of {MINTERM_MAX_COMPONENTS}",
                    model.n()
                ),
            }),
            _ => Ok(()),
        }
    }
}
