//! Resource comparison: Monte Carlo shots vs amplitude-estimation queries
//! needed to reach a target absolute error.

use std::collections::BTreeMap;

use crate::classical::{convergence_sweep, exact_reliability, loglog_slope, median, monte_carlo, sweep_seed};
use crate::relmodel::ReliabilityModel;
use crate::rng::derive_seed;
use crate::statevec::DEFAULT_QUBIT_CAP;

use super::{ancillas_required, modal_error_bound, qae_with_cap, OracleBackend, QaeReadout, TwinError};

#[derive(Debug, Clone, PartialEq)]
pub struct CompareOptions {
    pub backend: OracleBackend,
    pub seed: u64,
    /// Independent Monte Carlo runs per candidate shot count.
    pub mc_repeats: u64,
    /// First shot count of the doubling schedule.
    pub mc_start_shots: u64,
    /// Give up (resource error) beyond this many shots.
    pub mc_max_shots: u64,
    /// Shot counts for the Monte Carlo slope fit.
    pub sweep_schedule: Vec<u64>,
    pub sweep_repeats: u64,
    /// Phase-qubit counts for the amplitude-estimation slope fit.
    pub qae_sweep: Vec<usize>,
    pub qubit_cap: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            backend: OracleBackend::Semantic,
            seed: 0,
            mc_repeats: 15,
            mc_start_shots: 100,
            mc_max_shots: 100 << 17,
            sweep_schedule: vec![100, 1_000, 10_000, 100_000, 1_000_000],
            sweep_repeats: 25,
            qae_sweep: (4..=10).collect(),
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub target_error: f64,
    pub mc_shots: u64,
    /// Median absolute error over the repeats at `mc_shots`.
    pub mc_achieved_error: f64,
    pub qae_phase_qubits: usize,
    pub qae_oracle_queries: u64,
    pub qae_achieved_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaeSweepPoint {
    pub phase_qubits: usize,
    pub oracle_queries: u64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub truth: f64,
    pub rows: Vec<ComparisonRow>,
    pub mc_slope: f64,
    pub qae_slope: f64,
    pub qae_sweep: Vec<QaeSweepPoint>,
}

/// For each target error: the Monte Carlo shot count (first doubling step
/// whose median error over repeats is within target) against the phase
/// qubits of amplitude estimation (smallest `m` whose modal bound
/// `π/2^m + π²/4^m` is within target, confirmed by exact simulation).
pub fn sample_complexity_compare(
    model: &ReliabilityModel,
    targets: &[f64],
    opts: &CompareOptions,
) -> Result<Comparison, TwinError> {
    if targets.is_empty() {
        return Err(TwinError::Invalid("at least one target error is required".into()));
    }
    if let Some(bad) = targets.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(TwinError::Invalid(format!("target error {bad} must lie in (0, 1)")));
    }
    let truth = exact_reliability(model)?.reliability;

    // Resource feasibility before any heavy work.
    let base = model.n() + ancillas_required(model, opts.backend)? + 1;
    let needed_m: Vec<usize> = targets.iter().map(|&e| phase_qubits_for(e)).collect();
    let largest = needed_m.iter().chain(opts.qae_sweep.iter()).copied().max().unwrap_or(0);
    if base + largest > opts.qubit_cap {
        return Err(TwinError::Resource {
            requested: base + largest,
            permitted: opts.qubit_cap,
        });
    }

    let mut qae_errors: BTreeMap<usize, f64> = BTreeMap::new();
    let mut qae_error = |m: usize| -> Result<f64, TwinError> {
        if let Some(e) = qae_errors.get(&m) {
            return Ok(*e);
        }
        let est = qae_with_cap(model, opts.backend, m, QaeReadout::Exact, opts.qubit_cap)?;
        let e = (est.estimate - truth).abs();
        qae_errors.insert(m, e);
        Ok(e)
    };

    let qae_sweep = opts
        .qae_sweep
        .iter()
        .map(|&m| {
            Ok(QaeSweepPoint {
                phase_qubits: m,
                oracle_queries: 1 << m,
                abs_error: qae_error(m)?,
            })
        })
        .collect::<Result<Vec<_>, TwinError>>()?;
    let qae_slope = loglog_slope(
        &qae_sweep.iter().map(|p| p.oracle_queries as f64).collect::<Vec<_>>(),
        &qae_sweep.iter().map(|p| p.abs_error).collect::<Vec<_>>(),
    );

    let mc_seed = derive_seed(opts.seed, 0);
    let mut rows = Vec::with_capacity(targets.len());
    for (&eps, &m) in targets.iter().zip(&needed_m) {
        let (mc_shots, mc_achieved_error) = mc_shots_for(model, truth, eps, mc_seed, opts)?;
        rows.push(ComparisonRow {
            target_error: eps,
            mc_shots,
            mc_achieved_error,
            qae_phase_qubits: m,
            qae_oracle_queries: 1 << m,
            qae_achieved_error: qae_error(m)?,
        });
    }

    let mc_slope = if opts.sweep_schedule.len() >= 2 {
        convergence_sweep(
            model,
            &opts.sweep_schedule,
            opts.sweep_repeats,
            derive_seed(opts.seed, 1),
        )?
        .slope
    } else {
        f64::NAN
    };

    Ok(Comparison {
        truth,
        rows,
        mc_slope,
        qae_slope,
        qae_sweep,
    })
}

/// Smallest `m` with `modal_error_bound(m) ≤ eps`.
pub(crate) fn phase_qubits_for(eps: f64) -> usize {
    (1..63).find(|&m| modal_error_bound(m) <= eps).unwrap_or(63)
}

fn mc_shots_for(
    model: &ReliabilityModel,
    truth: f64,
    eps: f64,
    seed: u64,
    opts: &CompareOptions,
) -> Result<(u64, f64), TwinError> {
    let mut shots = opts.mc_start_shots.max(1);
    let mut step = 0usize;
    while shots <= opts.mc_max_shots {
        let errors: Vec<f64> = (0..opts.mc_repeats.max(1))
            .map(|r| {
                monte_carlo(model, shots, sweep_seed(seed, step, r))
                    .map(|mc| (mc.estimate - truth).abs())
                    .map_err(TwinError::from)
            })
            .collect::<Result<_, _>>()?;
        let med = median(&errors);
        if med <= eps {
            return Ok((shots, med));
        }
        shots *= 2;
        step += 1;
    }
    Err(TwinError::ShotLimit {
        target: eps,
        max_shots: opts.mc_max_shots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_qubit_selection() {
        assert_eq!(phase_qubits_for(0.02), 8);
        assert!(modal_error_bound(7) > 0.02);
        assert_eq!(phase_qubits_for(0.5), 4);
    }
}
