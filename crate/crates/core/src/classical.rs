//! Classical baselines: exact enumeration of all `2^N` component states and
//! plain seeded Monte Carlo.

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::relmodel::{ReliabilityModel, DEFAULT_COMPONENT_CAP};
use crate::rng::{derive_seed, seeded};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("enumeration of {n} components exceeds the cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactResult {
    pub reliability: f64,
    pub states_enumerated: u64,
    pub lolp: f64,
}

pub fn exact_reliability(model: &ReliabilityModel) -> Result<ExactResult, ClassicalError> {
    exact_reliability_with_cap(model, DEFAULT_COMPONENT_CAP)
}

pub fn exact_reliability_with_cap(model: &ReliabilityModel, cap: usize) -> Result<ExactResult, ClassicalError> {
    let n = model.n();
    if n > cap {
        return Err(ClassicalError::EnumerationCap { n, cap });
    }
    let states = 1u64 << n;
    let reliability: f64 = (0..states)
        .filter(|&x| model.evaluate_mask(x))
        .map(|x| model.mask_probability(x))
        .sum::<f64>()
        .clamp(0.0, 1.0);
    Ok(ExactResult {
        reliability,
        states_enumerated: states,
        lolp: 1.0 - reliability,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult {
    pub estimate: f64,
    pub stderr: f64,
    /// `estimate ± 1.96·stderr`, clamped to `[0, 1]`.
    pub ci95: (f64, f64),
    pub shots: u64,
    pub seed: u64,
}

impl MonteCarloResult {
    pub fn from_successes(successes: u64, shots: u64, seed: u64) -> Self {
        let estimate = successes as f64 / shots as f64;
        let stderr = (estimate * (1.0 - estimate) / shots as f64).sqrt();
        MonteCarloResult {
            estimate,
            stderr,
            ci95: ((estimate - 1.96 * stderr).max(0.0), (estimate + 1.96 * stderr).min(1.0)),
            shots,
            seed,
        }
    }

    pub fn covers(&self, truth: f64) -> bool {
        self.ci95.0 <= truth && truth <= self.ci95.1
    }
}

/// Samples component states i.i.d. by availability and averages the
/// structure function.
pub fn monte_carlo(model: &ReliabilityModel, shots: u64, seed: u64) -> Result<MonteCarloResult, ClassicalError> {
    if shots == 0 {
        return Err(ClassicalError::Invalid("shots must be at least 1".into()));
    }
    let ps = model.availabilities();
    let mut rng = seeded(seed);
    let mut successes = 0u64;
    for _ in 0..shots {
        let mut mask = 0u64;
        for (i, &p) in ps.iter().enumerate() {
            if rng.gen::<f64>() < p {
                mask |= 1 << i;
            }
        }
        successes += u64::from(model.evaluate_mask(mask));
    }
    Ok(MonteCarloResult::from_successes(successes, shots, seed))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub shots: u64,
    pub median_abs_error: f64,
    pub mean_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSweep {
    pub truth: f64,
    pub repeats: u64,
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of ln(median error) against ln(shots).
    pub slope: f64,
}

/// Seed of repeat `r` at schedule position `i`.
pub fn sweep_seed(master: u64, i: usize, r: u64) -> u64 {
    derive_seed(derive_seed(master, i as u64), r)
}

/// Median absolute error of Monte Carlo against enumerated truth for each
/// shot count in `schedule`. Repeats run concurrently; their seeds come from
/// [`sweep_seed`].
pub fn convergence_sweep(
    model: &ReliabilityModel,
    schedule: &[u64],
    repeats: u64,
    seed: u64,
) -> Result<ConvergenceSweep, ClassicalError> {
    if schedule.is_empty() || repeats == 0 {
        return Err(ClassicalError::Invalid(
            "sweep needs a non-empty schedule and at least one repeat".into(),
        ));
    }
    let truth = exact_reliability(model)?.reliability;
    let rows = schedule
        .iter()
        .enumerate()
        .map(|(i, &shots)| {
            let errors: Vec<f64> = (0..repeats)
                .into_par_iter()
                .map(|r| monte_carlo(model, shots, sweep_seed(seed, i, r)).map(|mc| (mc.estimate - truth).abs()))
                .collect::<Result<_, _>>()?;
            Ok(SweepRow {
                shots,
                median_abs_error: median(&errors),
                mean_abs_error: errors.iter().sum::<f64>() / errors.len() as f64,
            })
        })
        .collect::<Result<Vec<_>, ClassicalError>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.shots as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.median_abs_error).collect();
    Ok(ConvergenceSweep {
        truth,
        repeats,
        slope: loglog_slope(&xs, &ys),
        rows,
    })
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Ordinary least-squares slope of `ln y` on `ln x`. Pairs with a
/// nonpositive coordinate are skipped; NaN if fewer than two remain.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}
