//! Grover amplification and phase-estimation amplitude estimation on a twin.

use std::f64::consts::PI;

use crate::circuit::{Circuit, Gate, GateStats};
use crate::relmodel::ReliabilityModel;
use crate::statevec::{StateVector, DEFAULT_QUBIT_CAP};

use super::{build_twin_with, OracleBackend, Twin, TwinError, TwinLayout};

/// `Q = A · S₀ · A⁻¹ · S_χ` on the A register (`S_χ` applied first).
///
/// `S_χ` is Z on the output qubit and `S₀` flips the sign of `|0…0⟩`. With
/// `θ_a = arcsin(√a)`, `Qᵏ A|0⟩` has `P(output = 1) = sin²((2k+1)θ_a)`.
/// `Q` differs from the textbook operator by a global factor −1.
pub fn grover_operator(a: &Circuit, layout: &TwinLayout) -> Result<Circuit, TwinError> {
    let reg = layout.a_register();
    let mut q = Circuit::new(a.num_qubits());
    q.append(Gate::Z(layout.output_qubit))?;
    q.extend(&a.inverse())?;
    reflect_zero(&mut q, &reg, None)?;
    q.extend(a)?;
    Ok(q)
}

/// Controlled textbook Grover operator `−Q`, controlled on `control`.
///
/// Only the reflections carry the control: `A · C(S₀) · A⁻¹ = C(A S₀ A⁻¹)`
/// because `A A⁻¹ = I` on the control-off branch. The trailing Z on the
/// control supplies the −1, making the eigenphases `±2θ_a`.
pub fn controlled_grover(a: &Circuit, layout: &TwinLayout, control: usize) -> Result<Circuit, TwinError> {
    let reg = layout.a_register();
    if reg.contains(&control) {
        return Err(TwinError::Invalid(format!(
            "control qubit {control} lies inside the A register"
        )));
    }
    let a = a.widened(a.num_qubits().max(layout.total_qubits).max(control + 1));
    let mut q = Circuit::new(a.num_qubits());
    q.append(Gate::MCZ(vec![control, layout.output_qubit]))?;
    q.extend(&a.inverse())?;
    reflect_zero(&mut q, &reg, Some(control))?;
    q.extend(&a)?;
    q.append(Gate::Z(control))?;
    Ok(q)
}

fn reflect_zero(c: &mut Circuit, reg: &[usize], control: Option<usize>) -> Result<(), TwinError> {
    for &r in reg {
        c.append(Gate::X(r))?;
    }
    let mut qs = reg.to_vec();
    qs.extend(control);
    c.append(Gate::MCZ(qs))?;
    for &r in reg {
        c.append(Gate::X(r))?;
    }
    Ok(())
}

/// `P(output = 1)` after `Qᵏ A|0…0⟩`.
pub fn grover_success_probability(twin: &Twin, k: usize) -> Result<f64, TwinError> {
    let q = grover_operator(&twin.circuit, &twin.layout)?;
    let mut s = twin.prepare()?;
    for _ in 0..k {
        s.run(&q)?;
    }
    Ok(s.marginal_probability(twin.layout.output_qubit, true)?)
}

/// Quantum Fourier transform on `register` (entry 0 is the low bit):
/// `|y⟩ → 2^{-m/2} Σ_k e^{2πi·yk/2^m} |k⟩`.
pub fn qft(register: &[usize], num_qubits: usize) -> Result<Circuit, TwinError> {
    let m = register.len();
    let mut c = Circuit::new(num_qubits);
    for i in (0..m).rev() {
        c.append(Gate::H(register[i]))?;
        for j in (0..i).rev() {
            c.append(Gate::CPhase {
                control: register[j],
                target: register[i],
                angle: PI / (1u64 << (i - j)) as f64,
            })?;
        }
    }
    for i in 0..m / 2 {
        c.append(Gate::Swap(register[i], register[m - 1 - i]))?;
    }
    Ok(c)
}

/// `π/2^m + π²/4^m`, the modal-outcome error bound used throughout.
pub fn modal_error_bound(m: usize) -> f64 {
    let big_m = (1u64 << m) as f64;
    PI / big_m + PI * PI / (big_m * big_m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QaeReadout {
    /// Most probable phase outcome of the exact final state.
    Exact,
    /// Most frequent outcome among `shots` seeded measurements.
    Sampled { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeEstimate {
    /// `sin²(π·y/2^m)`.
    pub estimate: f64,
    pub phase_qubits: usize,
    pub modal_outcome: usize,
    /// Probability (exact) or frequency (sampled) of the modal outcome.
    pub modal_weight: f64,
    /// Applications of A: `2^m − 1` inside the controlled powers plus the
    /// initial preparation.
    pub oracle_queries: u64,
    pub layout: TwinLayout,
    pub stats: GateStats,
    pub semantic_oracle: bool,
}

pub fn qae(
    model: &ReliabilityModel,
    backend: OracleBackend,
    phase_qubits: usize,
    readout: QaeReadout,
) -> Result<AmplitudeEstimate, TwinError> {
    qae_with_cap(model, backend, phase_qubits, readout, DEFAULT_QUBIT_CAP)
}

/// Canonical amplitude estimation: H on the phase register, controlled
/// `Q^(2^j)` from phase qubit `j`, inverse QFT, modal read-out.
///
/// The state before the inverse QFT is `Σ_y |y⟩ ⊗ Qᵗʸ A|0⟩ / √2^m` (`Qᵗ` the
/// textbook operator), which is built block by block with one application
/// of `Qᵗ` per phase value instead of `2^m − 1` controlled applications over
/// the whole register. [`qae_circuit`] gives the equivalent gate sequence.
pub fn qae_with_cap(
    model: &ReliabilityModel,
    backend: OracleBackend,
    phase_qubits: usize,
    readout: QaeReadout,
    cap: usize,
) -> Result<AmplitudeEstimate, TwinError> {
    let (circuit, layout) = qae_circuit(model, backend, phase_qubits, cap)?;
    let state = qae_final_state(model, backend, phase_qubits, cap)?;
    let (modal_outcome, modal_weight) = match readout {
        QaeReadout::Exact => {
            let dist = state.register_distribution(&layout.phase_register)?;
            argmax(dist.iter().copied().enumerate())
        }
        QaeReadout::Sampled { shots, seed } => {
            if shots == 0 {
                return Err(TwinError::Invalid("shots must be at least 1".into()));
            }
            let counts = state.sample_register(&layout.phase_register, shots, seed)?;
            let (y, c) = argmax(counts.into_iter().map(|(y, c)| (y, c as f64)));
            (y, c / shots as f64)
        }
    };
    let estimate = phase_to_amplitude(modal_outcome as u64, phase_qubits);
    Ok(AmplitudeEstimate {
        estimate,
        phase_qubits,
        modal_outcome,
        modal_weight,
        oracle_queries: 1u64 << phase_qubits,
        semantic_oracle: circuit.contains_predicate_oracle(),
        stats: circuit.stats(),
        layout,
    })
}

fn check_phase_qubits(phase_qubits: usize) -> Result<(), TwinError> {
    if phase_qubits == 0 || phase_qubits >= 63 {
        return Err(TwinError::Invalid(format!(
            "phase qubit count {phase_qubits} must be between 1 and 62"
        )));
    }
    Ok(())
}

/// Full gate sequence of amplitude estimation with `phase_qubits` phase
/// qubits, ending before measurement.
pub fn qae_circuit(
    model: &ReliabilityModel,
    backend: OracleBackend,
    phase_qubits: usize,
    cap: usize,
) -> Result<(Circuit, TwinLayout), TwinError> {
    check_phase_qubits(phase_qubits)?;
    let twin = build_twin_with(model, backend, phase_qubits, cap)?;
    let layout = twin.layout.clone();
    let width = layout.total_qubits;
    let a = twin.circuit.widened(width);

    let mut circuit = a.clone();
    for &p in &layout.phase_register {
        circuit.append(Gate::H(p))?;
    }
    for (j, &p) in layout.phase_register.iter().enumerate() {
        let cq = controlled_grover(&a, &layout, p)?;
        for _ in 0..1u64 << j {
            circuit.extend(&cq)?;
        }
    }
    circuit.extend(&qft(&layout.phase_register, width)?.inverse())?;
    Ok((circuit, layout))
}

/// State produced by [`qae_circuit`] from `|0…0⟩`.
pub fn qae_final_state(
    model: &ReliabilityModel,
    backend: OracleBackend,
    phase_qubits: usize,
    cap: usize,
) -> Result<StateVector, TwinError> {
    check_phase_qubits(phase_qubits)?;
    let twin = build_twin_with(model, backend, phase_qubits, cap)?;
    let layout = &twin.layout;
    let q = grover_operator(&twin.circuit, layout)?;
    let block = 1usize << layout.a_width();
    let norm = 1.0 / ((1u64 << phase_qubits) as f64).sqrt();

    let mut state = StateVector::init_zero_with_cap(layout.total_qubits, cap)?;
    let mut psi = twin.prepare()?;
    let amps = state.amplitudes_mut();
    for y in 0..1usize << phase_qubits {
        if y > 0 {
            // Textbook operator: −Q.
            psi.run(&q)?;
            for z in psi.amplitudes_mut() {
                *z = -*z;
            }
        }
        for (dst, src) in amps[y * block..(y + 1) * block].iter_mut().zip(psi.amplitudes()) {
            *dst = src * norm;
        }
    }
    state.run(&qft(&layout.phase_register, layout.total_qubits)?.inverse())?;
    Ok(state)
}

/// `sin²(π·y/2^m)`, evaluated as `(1 − cos(2πy/2^m))/2` with the cosine
/// taken exactly at multiples of a quarter turn.
pub(crate) fn phase_to_amplitude(y: u64, m: usize) -> f64 {
    let big = 1u64 << m;
    let y = y % big;
    let cos = if (4 * y).is_multiple_of(big) {
        match 4 * y / big {
            0 => 1.0,
            2 => -1.0,
            _ => 0.0,
        }
    } else {
        (2.0 * PI * y as f64 / big as f64).cos()
    };
    (1.0 - cos) / 2.0
}

/// First index of the largest weight.
fn argmax(items: impl Iterator<Item = (usize, f64)>) -> (usize, f64) {
    items.fold(
        (0, f64::NEG_INFINITY),
        |best, (i, w)| if w > best.1 { (i, w) } else { best },
    )
}
