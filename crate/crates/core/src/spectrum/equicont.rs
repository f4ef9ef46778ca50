//! Mean equicontinuity probes.
//!
//! A system is mean equicontinuous when points that start close stay close
//! in the mean metric along the window sequence. The test fixes a scale
//! `ε`, walks a small grid of candidate `δ`, rejection-samples pairs with
//! `d(x, y) < δ`, and checks how often the windowed mean distance escapes
//! `2ε`. One accepted `δ` (escape fraction below `ε`) passes the system;
//! a `δ` too small to yield pairs within its trial budget is excluded
//! rather than guessed at.
//!
//! Two modes share the machinery: plain mean equicontinuity watches the
//! tail windows (a limsup stand-in), equicontinuity in the mean watches
//! every ladder window.

use crate::error::{Error, Result};
use crate::meanmetric::{GroupMeasure, MeanKernel};
use crate::seeds;
use crate::systems::{DynamicalSystem, PointSample};
use rand::Rng;
use serde::Serialize;

/// Pairs collected per `δ` before the budget stops the search.
const PAIR_TARGET: usize = 128;
/// Trial draws allowed per collected pair slot.
const ATTEMPTS_PER_PAIR: usize = 40;
/// Fewer matched pairs than this marks the `δ` as starved.
const MIN_PAIRS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EquicontMode {
    /// Escape checked on the tail of the window ladder.
    MeanEquicontinuity,
    /// Escape checked on every ladder window.
    InTheMean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EquicontVerdict {
    Equicontinuous,
    NotEquicontinuous,
    Inconclusive,
}

/// Outcome for one candidate `δ`.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaRow {
    pub delta: f64,
    pub attempts: usize,
    pub pairs: usize,
    pub starved: bool,
    /// Fraction of tested pairs whose mean distance escaped `2ε`.
    pub failing_fraction: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquicontReport {
    pub system: String,
    pub family: String,
    pub mode: EquicontMode,
    pub epsilon: f64,
    pub n_max: u32,
    pub sample_size: usize,
    pub seed: u64,
    /// Tempering constant of the window family, when cheaply computable.
    pub shulman_constant: Option<f64>,
    pub ladder: Vec<u32>,
    pub rows: Vec<DeltaRow>,
    pub verdict: EquicontVerdict,
}

/// Geometric ladder of window indices ending at `n_max`.
fn window_ladder(n_max: u32) -> Vec<u32> {
    let mut ladder: Vec<u32> = [n_max / 8, n_max / 4, n_max / 2, n_max]
        .into_iter()
        .filter(|&n| n >= 1)
        .collect();
    ladder.dedup();
    ladder
}

pub fn mean_equicontinuity_test(
    system: &DynamicalSystem,
    family: Option<&str>,
    epsilon: f64,
    n_max: u32,
    sample_size: usize,
    seed: u64,
) -> Result<EquicontReport> {
    run_mode(
        system,
        family,
        EquicontMode::MeanEquicontinuity,
        epsilon,
        n_max,
        sample_size,
        seed,
    )
}

pub fn equicontinuity_in_mean_test(
    system: &DynamicalSystem,
    family: Option<&str>,
    epsilon: f64,
    n_max: u32,
    sample_size: usize,
    seed: u64,
) -> Result<EquicontReport> {
    run_mode(
        system,
        family,
        EquicontMode::InTheMean,
        epsilon,
        n_max,
        sample_size,
        seed,
    )
}

fn run_mode(
    system: &DynamicalSystem,
    family: Option<&str>,
    mode: EquicontMode,
    epsilon: f64,
    n_max: u32,
    sample_size: usize,
    seed: u64,
) -> Result<EquicontReport> {
    if !(epsilon.is_finite() && epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::BadParameter {
            name: "epsilon".into(),
            reason: format!("must lie in (0, 0.5), got {epsilon}"),
        });
    }
    if n_max < 8 {
        return Err(Error::BadParameter {
            name: "n_max".into(),
            reason: "the window ladder needs n_max of at least 8".into(),
        });
    }
    let family = family.unwrap_or_else(|| system.group.default_family());
    let ladder = window_ladder(n_max);
    let proxy_from = match mode {
        EquicontMode::MeanEquicontinuity => ladder.len() - ladder.len().div_ceil(4),
        EquicontMode::InTheMean => 0,
    };

    let sample = system.sample(sample_size, seeds::derive(seed, "equicont-sample"));
    let n = sample.len();
    if n < 2 {
        return Err(Error::SampleTooSmall {
            actual: n,
            required: 2,
            epsilon,
        });
    }

    let shulman_constant = system
        .group
        .shulman_report(family, n_max.clamp(2, 6))
        .ok()
        .map(|r| r.constant);

    let mut rows = Vec::with_capacity(4);
    for (i, delta) in [epsilon, epsilon / 2.0, epsilon / 4.0, epsilon / 8.0]
        .into_iter()
        .enumerate()
    {
        let mut rng = seeds::rng(seeds::derive_indexed(seed, "equicont-pairs", i as u64));
        let mut pair_states = Vec::new();
        let mut attempts = 0usize;
        while pair_states.len() / 2 < PAIR_TARGET && attempts < PAIR_TARGET * ATTEMPTS_PER_PAIR {
            attempts += 1;
            let j = rng.random_range(0..n);
            let k = rng.random_range(0..n);
            if j == k {
                continue;
            }
            if system.metric(&sample.states[j], &sample.states[k]) < delta {
                pair_states.push(sample.states[j].clone());
                pair_states.push(sample.states[k].clone());
            }
        }
        let pairs = pair_states.len() / 2;
        if pairs < MIN_PAIRS {
            rows.push(DeltaRow {
                delta,
                attempts,
                pairs,
                starved: true,
                failing_fraction: 0.0,
                accepted: false,
            });
            continue;
        }

        let packed = PointSample {
            states: pair_states,
            seed,
        };
        let mut failing = vec![false; pairs];
        for &idx in &ladder[proxy_from..] {
            let window = system.group.folner_window(family, idx)?;
            let measure = GroupMeasure::from_window(&window, None)?;
            let kernel = MeanKernel::build(system, &measure, &packed)?;
            for (p, slot) in failing.iter_mut().enumerate() {
                if !*slot && !kernel.dist_lt(2 * p, 2 * p + 1, 2.0 * epsilon) {
                    *slot = true;
                }
            }
        }
        let failing_fraction = failing.iter().filter(|&&b| b).count() as f64 / pairs as f64;
        rows.push(DeltaRow {
            delta,
            attempts,
            pairs,
            starved: false,
            failing_fraction,
            accepted: failing_fraction < epsilon,
        });
    }

    let verdict = if rows.iter().any(|r| r.accepted) {
        EquicontVerdict::Equicontinuous
    } else if rows.iter().all(|r| r.starved) {
        EquicontVerdict::Inconclusive
    } else {
        EquicontVerdict::NotEquicontinuous
    };

    Ok(EquicontReport {
        system: system.name.clone(),
        family: family.to_string(),
        mode,
        epsilon,
        n_max,
        sample_size,
        seed,
        shulman_constant,
        ladder,
        rows,
        verdict,
    })
}
