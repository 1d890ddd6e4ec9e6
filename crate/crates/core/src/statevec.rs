//! Dense statevector simulator.
//!
//! A state on `n` qubits stores exactly `2^n` amplitudes. Qubit `q` is bit `q`
//! of the amplitude index. Single-target kernels visit each amplitude pair
//! `(i, i | 1 << q)` once by stepping through blocks of `2^(q+1)`.
//!
//! Kernels may run on the rayon pool for large states; every pair is written
//! by exactly one task, so results do not depend on scheduling. Reductions
//! (norms, marginals) are sequential in index order.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate};
use crate::rng::{derive_seed, seeded, SimRng};

pub type C64 = Complex64;

/// Default largest simulable register.
pub const DEFAULT_QUBIT_CAP: usize = 26;

const PAR_MIN_LEN: usize = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("resource limit: {requested} qubits requested, at most {permitted} permitted")]
    Resource { requested: usize, permitted: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("circuit acts on {circuit} qubits but the state has {state}")]
    QubitCountMismatch { circuit: usize, state: usize },
    #[error("qubit {qubit} out of range for a {n}-qubit state")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("depolarizing probability {0} is outside [0, 1]")]
    NoiseLambda(f64),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits, with the default qubit cap.
    pub fn init_zero(n: usize) -> Result<Self, SimError> {
        Self::init_zero_with_cap(n, DEFAULT_QUBIT_CAP)
    }

    pub fn init_zero_with_cap(n: usize, cap: usize) -> Result<Self, SimError> {
        Self::basis_with_cap(n, 0, cap)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self, SimError> {
        Self::basis_with_cap(n, index, DEFAULT_QUBIT_CAP)
    }

    fn basis_with_cap(n: usize, index: usize, cap: usize) -> Result<Self, SimError> {
        if n == 0 || n > cap {
            return Err(SimError::Resource {
                requested: n,
                permitted: cap,
            });
        }
        if index >= 1 << n {
            return Err(SimError::Invalid(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Wraps raw amplitudes; length must be a power of two and the norm 1.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::Invalid(format!(
                "amplitude count {len} is not a power of two ≥ 2"
            )));
        }
        let n = len.trailing_zeros() as usize;
        if n > DEFAULT_QUBIT_CAP {
            return Err(SimError::Resource {
                requested: n,
                permitted: DEFAULT_QUBIT_CAP,
            });
        }
        let s = StateVector { n, amps };
        let drift = (s.norm_sqr() - 1.0).abs();
        if drift > 1e-10 {
            return Err(SimError::Invalid(format!(
                "state is not normalized (|1 − ‖ψ‖²| = {drift:e})"
            )));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.n, other.n);
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), SimError> {
        if qubit >= self.n {
            Err(SimError::QubitOutOfRange { qubit, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        gate.validate(self.n)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    fn apply_unchecked(&mut self, gate: &Gate) {
        let one = C64::new(1.0, 0.0);
        match gate {
            Gate::RY { target, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                let m = [c, -s, s, c].map(|v| C64::new(v, 0.0));
                self.apply_matrix(*target, m, 0);
            }
            Gate::X(t) => self.apply_x(*t, 0),
            Gate::Y(t) => {
                let i = C64::new(0.0, 1.0);
                for_each_pair(&mut self.amps, *t, |_, a0, a1| {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = -i * x1;
                    *a1 = i * x0;
                });
            }
            Gate::Z(t) => self.apply_phase(1 << t, -one),
            Gate::H(t) => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                self.apply_matrix(*t, [h, h, h, -h], 0);
            }
            Gate::Phase { target, angle } => self.apply_phase(1 << target, C64::from_polar(1.0, *angle)),
            Gate::CX { control, target } => self.apply_x(*target, 1 << control),
            Gate::CCX { c1, c2, target } => self.apply_x(*target, (1 << c1) | (1 << c2)),
            Gate::MCX { controls, target } => self.apply_x(*target, mask_of(controls)),
            Gate::MCZ(qs) => self.apply_phase(mask_of(qs), -one),
            Gate::Swap(a, b) => {
                let (a, b) = (*a, *b);
                let flip = (1usize << a) | (1usize << b);
                for i in 0..self.amps.len() {
                    if i >> a & 1 == 1 && i >> b & 1 == 0 {
                        self.amps.swap(i, i ^ flip);
                    }
                }
            }
            Gate::CPhase { control, target, angle } => {
                self.apply_phase((1 << control) | (1 << target), C64::from_polar(1.0, *angle))
            }
            Gate::PredicateOracle {
                inputs,
                target,
                predicate,
            } => {
                let table = predicate.truth_table();
                for_each_pair(&mut self.amps, *target, |i, a0, a1| {
                    let x = inputs
                        .iter()
                        .enumerate()
                        .fold(0usize, |x, (k, &q)| x | ((i >> q & 1) << k));
                    if table[x] {
                        std::mem::swap(a0, a1);
                    }
                });
            }
        }
    }

    /// 2×2 matrix `[m00, m01, m10, m11]` on `target`, applied where every bit
    /// of `controls` is set.
    fn apply_matrix(&mut self, target: usize, m: [C64; 4], controls: usize) {
        let update = |a0: &mut C64, a1: &mut C64| {
            let (x0, x1) = (*a0, *a1);
            *a0 = m[0] * x0 + m[1] * x1;
            *a1 = m[2] * x0 + m[3] * x1;
        };
        if controls == 0 {
            for_each_pair(&mut self.amps, target, |_, a0, a1| update(a0, a1));
        } else {
            for_each_controlled_pair(&mut self.amps, target, controls, update);
        }
    }

    fn apply_x(&mut self, target: usize, controls: usize) {
        if controls == 0 {
            let stride = 1usize << target;
            let swap_halves = |chunk: &mut [C64]| {
                let (lo, hi) = chunk.split_at_mut(stride);
                lo.swap_with_slice(hi);
            };
            if self.amps.len() >= PAR_MIN_LEN {
                self.amps.par_chunks_mut(stride << 1).for_each(swap_halves);
            } else {
                self.amps.chunks_mut(stride << 1).for_each(swap_halves);
            }
        } else {
            for_each_controlled_pair(&mut self.amps, target, controls, std::mem::swap);
        }
    }

    /// Multiplies by `phase` every amplitude whose index has all `mask` bits set.
    fn apply_phase(&mut self, mask: usize, phase: C64) {
        let free = self.n - mask.count_ones() as usize;
        let fixed = set_bits(mask);
        let ptr = AmpPtr(self.amps.as_mut_ptr());
        let f = |k: usize| {
            let i = insert_zero_bits(k, &fixed) | mask;
            // SAFETY: `i < 2^n` and distinct `k` give distinct `i`.
            unsafe { *ptr.at(i) *= phase };
        };
        if self.amps.len() >= PAR_MIN_LEN {
            (0..1usize << free).into_par_iter().for_each(f);
        } else {
            (0..1usize << free).for_each(f);
        }
    }

    /// Applies every gate of `circuit` in order.
    pub fn run(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.num_qubits() != self.n {
            return Err(SimError::QubitCountMismatch {
                circuit: circuit.num_qubits(),
                state: self.n,
            });
        }
        for g in circuit.gates() {
            self.apply_unchecked(g);
        }
        Ok(())
    }

    /// Probability that `qubit` measures `value`.
    pub fn marginal_probability(&self, qubit: usize, value: bool) -> Result<f64, SimError> {
        self.check_qubit(qubit)?;
        let want = usize::from(value);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i >> qubit & 1 == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Distribution of the integer formed by `qubits` (entry 0 is the low bit).
    pub fn register_distribution(&self, qubits: &[usize]) -> Result<Vec<f64>, SimError> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut dist = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            dist[gather(i, qubits)] += a.norm_sqr();
        }
        Ok(dist)
    }

    /// Draws `shots` i.i.d. measurements of the whole register and reports the
    /// outcomes of `qubits`. Keys list the selected qubits left to right in
    /// the order given.
    pub fn sample(&self, qubits: &[usize], shots: u64, seed: u64) -> Result<SampleCounts, SimError> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut rng = seeded(seed);
        let by_register = self.sample_indices(&mut rng, qubits, shots);
        let counts = by_register
            .into_iter()
            .map(|(x, c)| (bitstring(x, qubits.len()), c))
            .collect();
        Ok(SampleCounts { counts, shots })
    }

    /// Sampled outcome counts keyed by register value (qubit order as given).
    pub fn sample_register(&self, qubits: &[usize], shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>, SimError> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        Ok(self.sample_indices(&mut seeded(seed), qubits, shots))
    }

    fn sample_indices(&self, rng: &mut SimRng, qubits: &[usize], shots: u64) -> BTreeMap<usize, u64> {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let last = self.amps.len() - 1;
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = rng.gen::<f64>() * acc;
            let i = cdf.partition_point(|&c| c <= u).min(last);
            *counts.entry(gather(i, qubits)).or_insert(0) += 1;
        }
        counts
    }
}

/// Runs `circuit` on `initial` and returns the final state.
pub fn run(circuit: &Circuit, initial: StateVector) -> Result<StateVector, SimError> {
    let mut s = initial;
    s.run(circuit)?;
    Ok(s)
}

fn mask_of(qs: &[usize]) -> usize {
    qs.iter().fold(0, |m, q| m | (1 << q))
}

fn gather(i: usize, qubits: &[usize]) -> usize {
    qubits.iter().enumerate().fold(0, |x, (k, &q)| x | ((i >> q & 1) << k))
}

/// Renders `x` over `width` register bits, register bit 0 leftmost.
fn bitstring(x: usize, width: usize) -> String {
    (0..width).map(|k| if x >> k & 1 == 1 { '1' } else { '0' }).collect()
}

/// Raw amplitude pointer shared across workers that touch disjoint indices.
#[derive(Clone, Copy)]
struct AmpPtr(*mut C64);

// SAFETY: every use writes through disjoint indices only.
unsafe impl Send for AmpPtr {}
unsafe impl Sync for AmpPtr {}

impl AmpPtr {
    /// # Safety
    /// `i` must be in bounds and not accessed concurrently elsewhere.
    unsafe fn at(self, i: usize) -> *mut C64 {
        self.0.add(i)
    }
}

/// Ascending positions of the set bits of `mask`.
fn set_bits(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|b| mask >> b & 1 == 1).collect()
}

/// Spreads the bits of `k` around zeros inserted at `positions` (ascending).
fn insert_zero_bits(mut k: usize, positions: &[usize]) -> usize {
    for &p in positions {
        let low = k & ((1 << p) - 1);
        k = (k - low) << 1 | low;
    }
    k
}

/// Calls `f(ψ[i], ψ[i | 1<<target])` for the `2^(n−1−c)` indices `i` with
/// the target bit clear and every control bit set.
fn for_each_controlled_pair<F>(amps: &mut [C64], target: usize, controls: usize, f: F)
where
    F: Fn(&mut C64, &mut C64) + Sync + Send,
{
    let fixed_mask = controls | 1 << target;
    let fixed = set_bits(fixed_mask);
    let free = amps.len().trailing_zeros() as usize - fixed.len();
    let ptr = AmpPtr(amps.as_mut_ptr());
    let g = |k: usize| {
        let i = insert_zero_bits(k, &fixed) | controls;
        // SAFETY: indices stay below `amps.len()`, `i ≠ i | 1<<target`, and
        // distinct `k` give disjoint pairs.
        unsafe { f(&mut *ptr.at(i), &mut *ptr.at(i | 1 << target)) };
    };
    if amps.len() >= PAR_MIN_LEN {
        (0..1usize << free).into_par_iter().for_each(g);
    } else {
        (0..1usize << free).for_each(g);
    }
}

fn for_each_pair<F>(amps: &mut [C64], target: usize, f: F)
where
    F: Fn(usize, &mut C64, &mut C64) + Sync + Send,
{
    let stride = 1usize << target;
    let block = stride << 1;
    let run_block = |b: usize, chunk: &mut [C64]| {
        let (lo, hi) = chunk.split_at_mut(stride);
        let base = b * block;
        for (k, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            f(base + k, a0, a1);
        }
    };
    if amps.len() < PAR_MIN_LEN {
        amps.chunks_mut(block).enumerate().for_each(|(b, c)| run_block(b, c));
    } else if amps.len() / block >= 64 {
        amps.par_chunks_mut(block)
            .enumerate()
            .for_each(|(b, c)| run_block(b, c));
    } else {
        for (b, chunk) in amps.chunks_mut(block).enumerate() {
            let (lo, hi) = chunk.split_at_mut(stride);
            let base = b * block;
            lo.par_iter_mut()
                .zip(hi.par_iter_mut())
                .enumerate()
                .for_each(|(k, (a0, a1))| f(base + k, a0, a1));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleCounts {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
}

impl SampleCounts {
    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn frequency(&self, key: &str) -> f64 {
        self.get(key) as f64 / self.shots as f64
    }
}

/// Symmetric depolarizing noise: after every gate, each touched qubit is
/// fully depolarized with probability `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub lambda: f64,
    pub trajectories: u64,
}

impl NoiseModel {
    pub fn new(lambda: f64, trajectories: u64) -> Result<Self, SimError> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(SimError::NoiseLambda(lambda));
        }
        if trajectories == 0 {
            return Err(SimError::Invalid("trajectory count must be positive".into()));
        }
        Ok(NoiseModel { lambda, trajectories })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyOutcome {
    /// Trajectory mean of `P(observable = 1)`.
    pub mean: f64,
    /// Standard error of that mean across trajectories.
    pub stderr: f64,
    pub trajectories: u64,
}

/// Trajectory-averaged `P(qubit = 1)` of `circuit` run from `|0…0⟩` under
/// depolarizing noise.
///
/// A full depolarization is realized as a uniformly random element of
/// `{I, X, Y, Z}`, so the averaged channel is `ρ → (1 − λ)ρ + λ·I/2` per
/// touched qubit. Trajectory `t` draws from `derive_seed(seed, t)`.
pub fn run_noisy(circuit: &Circuit, noise: NoiseModel, qubit: usize, seed: u64) -> Result<NoisyOutcome, SimError> {
    let NoiseModel { lambda, trajectories } = NoiseModel::new(noise.lambda, noise.trajectories)?;
    let zero = StateVector::init_zero(circuit.num_qubits())?;
    zero.check_qubit(qubit)?;
    for g in circuit.gates() {
        g.validate(circuit.num_qubits())?;
    }
    if lambda == 0.0 {
        let p = run(circuit, zero)?.marginal_probability(qubit, true)?;
        return Ok(NoisyOutcome {
            mean: p,
            stderr: 0.0,
            trajectories,
        });
    }
    let one_trajectory = |t: u64| -> f64 {
        let mut rng = seeded(derive_seed(seed, t));
        let mut s = zero.clone();
        for g in circuit.gates() {
            s.apply_unchecked(g);
            for q in g.qubits() {
                if rng.gen::<f64>() < lambda {
                    match rng.gen_range(0..4u8) {
                        1 => s.apply_unchecked(&Gate::X(q)),
                        2 => s.apply_unchecked(&Gate::Y(q)),
                        3 => s.apply_unchecked(&Gate::Z(q)),
                        _ => {}
                    }
                }
            }
        }
        s.marginal_probability(qubit, true).expect("qubit checked")
    };
    let values: Vec<f64> = (0..trajectories).into_par_iter().map(one_trajectory).collect();
    let count = trajectories as f64;
    let mean = values.iter().sum::<f64>() / count;
    let var = if trajectories > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    Ok(NoisyOutcome {
        mean,
        stderr: (var / count).sqrt(),
        trajectories,
    })
}
