//! Reference implementations shared by the integration tests. None of these
//! call into the simulator kernels or the library's enumeration.
#![allow(dead_code)]

pub mod cli;

use num_complex::Complex64 as C64;
use quantum_twin::circuit::Gate;

pub type Matrix = Vec<Vec<C64>>;

/// Independent structure functions of the bundled models, keyed by name.
/// Bits follow component order in the model file.
pub fn reference_structure(name: &str) -> fn(&[bool]) -> bool {
    match name {
        "series-2" => |x| x[0] && x[1],
        "parallel-2" => |x| x[0] || x[1],
        // Minimal paths {e1,e4}, {e2,e5}, {e1,e3,e5}, {e2,e3,e4}.
        "bridge-5" => |x| (x[0] && x[3]) || (x[1] && x[4]) || (x[0] && x[2] && x[4]) || (x[1] && x[2] && x[3]),
        "gens-2of3" => |x| x.iter().filter(|b| **b).count() >= 2,
        // 50, 100, 150 MW against a 150 MW demand.
        "gens-capacity-3" => |x| x[2] || (x[0] && x[1]),
        // tx1 tx2 bkr l1 l2 l3 l4 tie sw l5
        "radial-feeder-10" => |x| (x[0] || x[1]) && x[2] && x[3] && x[4] && ((x[5] && x[6]) || (x[7] && x[8] && x[9])),
        other => panic!("no reference structure for {other}"),
    }
}

/// `Σ_x P(x)·φ(x)` by brute-force enumeration.
pub fn enumerate(p: &[f64], phi: impl Fn(&[bool]) -> bool) -> f64 {
    let n = p.len();
    let mut total = 0.0;
    for mask in 0u64..1 << n {
        let x: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if phi(&x) {
            total += x
                .iter()
                .zip(p)
                .map(|(&up, &pi)| if up { pi } else { 1.0 - pi })
                .product::<f64>();
        }
    }
    total
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect())
        .collect()
}

pub fn apply(m: &Matrix, v: &[C64]) -> Vec<C64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn ry(theta: f64) -> Matrix {
    let (s, co) = (theta / 2.0).sin_cos();
    vec![vec![c(co, 0.0), c(-s, 0.0)], vec![c(s, 0.0), c(co, 0.0)]]
}

pub fn pauli_x() -> Matrix {
    vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn pauli_y() -> Matrix {
    vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]
}

pub fn pauli_z() -> Matrix {
    phase(std::f64::consts::PI)
}

pub fn hadamard() -> Matrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]]
}

pub fn phase(theta: f64) -> Matrix {
    vec![
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), C64::from_polar(1.0, theta)],
    ]
}

fn projector(bit: usize) -> Matrix {
    let mut m = vec![vec![c(0.0, 0.0); 2]; 2];
    m[bit][bit] = c(1.0, 0.0);
    m
}

/// `ops[q]` on qubit `q`, identity elsewhere; qubit 0 is the rightmost factor.
pub fn tensor(n: usize, ops: &[(usize, Matrix)]) -> Matrix {
    let mut out = identity(1);
    for q in (0..n).rev() {
        let f = ops
            .iter()
            .find(|(k, _)| *k == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| identity(2));
        out = kron(&out, &f);
    }
    out
}

/// `u` on `target` when every control is 1: `I + Π₁ ⊗ (u − I)`.
pub fn controlled(n: usize, controls: &[usize], target: usize, u: &Matrix) -> Matrix {
    let mut ops: Vec<(usize, Matrix)> = controls.iter().map(|&q| (q, projector(1))).collect();
    let minus_i = add(u, &identity(2).iter().map(|r| r.iter().map(|z| -z).collect()).collect());
    ops.push((target, minus_i));
    add(&identity(1 << n), &tensor(n, &ops))
}

/// Matrix of `gate` on `n` qubits, built from tensor products and
/// permutation definitions.
pub fn gate_matrix(n: usize, gate: &Gate) -> Matrix {
    let dim = 1usize << n;
    match gate {
        Gate::RY { target, angle } => tensor(n, &[(*target, ry(*angle))]),
        Gate::X(q) => tensor(n, &[(*q, pauli_x())]),
        Gate::Y(q) => tensor(n, &[(*q, pauli_y())]),
        Gate::Z(q) => tensor(n, &[(*q, pauli_z())]),
        Gate::H(q) => tensor(n, &[(*q, hadamard())]),
        Gate::Phase { target, angle } => tensor(n, &[(*target, phase(*angle))]),
        Gate::CX { control, target } => controlled(n, &[*control], *target, &pauli_x()),
        Gate::CCX { c1, c2, target } => controlled(n, &[*c1, *c2], *target, &pauli_x()),
        Gate::MCX { controls, target } => controlled(n, controls, *target, &pauli_x()),
        Gate::MCZ(qs) => {
            let (last, rest) = qs.split_last().unwrap();
            controlled(n, rest, *last, &pauli_z())
        }
        Gate::CPhase { control, target, angle } => controlled(n, &[*control], *target, &phase(*angle)),
        Gate::Swap(a, b) => permutation(dim, |x| {
            let (ba, bb) = (x >> a & 1, x >> b & 1);
            x & !(1 << a) & !(1 << b) | bb << a | ba << b
        }),
        Gate::PredicateOracle {
            inputs,
            target,
            predicate,
        } => permutation(dim, |x| {
            let sub = inputs
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &q)| acc | ((x >> q & 1) as u64) << i);
            if predicate.eval(sub) {
                x ^ 1 << target
            } else {
                x
            }
        }),
    }
}

fn permutation(dim: usize, f: impl Fn(usize) -> usize) -> Matrix {
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    for x in 0..dim {
        m[f(x)][x] = c(1.0, 0.0);
    }
    m
}

/// 2×2 density-matrix evolution of one qubit from `|0⟩`: each unitary is
/// followed by `ρ → (1 − λ)ρ + λ·I/2`. Returns `ρ₁₁`.
pub fn depolarized_population(unitaries: &[Matrix], lambda: f64) -> f64 {
    let mut rho = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
    for u in unitaries {
        let u_dag: Matrix = (0..2).map(|i| (0..2).map(|j| u[j][i].conj()).collect()).collect();
        rho = matmul(&matmul(u, &rho), &u_dag);
        for (i, row) in rho.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                let mixed = if i == j { 0.5 } else { 0.0 };
                *z = *z * (1.0 - lambda) + c(lambda * mixed, 0.0);
            }
        }
    }
    rho[1][1].re
}

pub fn bundled_model_path(name: &str) -> String {
    format!("{}/models/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

use std::sync::Arc;

use quantum_twin::circuit::{Circuit, Predicate};
use quantum_twin::relmodel::Structure;
use rand::seq::SliceRandom;
use rand::Rng;

fn distinct(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut qs: Vec<usize> = (0..n).collect();
    qs.shuffle(rng);
    qs.truncate(k);
    qs
}

/// Uniformly chosen gate kind with random qubits and angles; kinds needing
/// more qubits than `n` fall back to RY.
pub fn random_gate(rng: &mut impl Rng, n: usize) -> Gate {
    let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let kind = rng.gen_range(0..13);
    let need = [1, 1, 1, 1, 1, 1, 2, 3, 2, 1, 2, 2, 2][kind];
    if need > n {
        return Gate::RY {
            target: rng.gen_range(0..n),
            angle,
        };
    }
    match kind {
        0 => Gate::RY {
            target: rng.gen_range(0..n),
            angle,
        },
        1 => Gate::X(rng.gen_range(0..n)),
        2 => Gate::Y(rng.gen_range(0..n)),
        3 => Gate::Z(rng.gen_range(0..n)),
        4 => Gate::H(rng.gen_range(0..n)),
        5 => Gate::Phase {
            target: rng.gen_range(0..n),
            angle,
        },
        6 => {
            let q = distinct(rng, n, 2);
            Gate::CX {
                control: q[0],
                target: q[1],
            }
        }
        7 => {
            let q = distinct(rng, n, 3);
            Gate::CCX {
                c1: q[0],
                c2: q[1],
                target: q[2],
            }
        }
        8 => {
            let k = rng.gen_range(2..=n);
            let mut q = distinct(rng, n, k);
            let target = q.pop().unwrap();
            Gate::MCX { controls: q, target }
        }
        9 => {
            let k = rng.gen_range(1..=n);
            Gate::MCZ(distinct(rng, n, k))
        }
        10 => {
            let q = distinct(rng, n, 2);
            Gate::Swap(q[0], q[1])
        }
        11 => {
            let q = distinct(rng, n, 2);
            Gate::CPhase {
                control: q[0],
                target: q[1],
                angle,
            }
        }
        _ => {
            let k = rng.gen_range(2..=n);
            let mut q = distinct(rng, n, k);
            let target = q.pop().unwrap();
            let arity = q.len();
            let threshold = rng.gen_range(1..=arity);
            let predicate = Predicate::new(
                arity,
                Structure::KOfN {
                    k: threshold,
                    of: (0..arity).map(Structure::Component).collect(),
                },
                Vec::new(),
            );
            Gate::PredicateOracle {
                inputs: q,
                target,
                predicate: Arc::new(predicate),
            }
        }
    }
}

pub fn random_circuit(rng: &mut impl Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        c.append(random_gate(rng, n)).unwrap();
    }
    c
}
