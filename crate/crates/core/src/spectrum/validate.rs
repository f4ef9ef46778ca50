//! Agreement checks between the independent diagnostics.
//!
//! `cross_validate` runs the complexity profile, the adversarial measure
//! search, the orbit-net profile and the mean equicontinuity test on one
//! system and compares their verdicts against its spectral label. The
//! diagnostics are estimators, not proofs, so each one may abstain; the
//! combined outcome is only inconsistent when some verdict actively
//! contradicts the label (or, for unlabeled systems, another verdict).

use super::equicont::{mean_equicontinuity_test, EquicontReport, EquicontVerdict};
use super::{dictionary, orbit_net_profile, OrbitNetProfile};
use crate::complexity::{
    folner_profile, max_mean_search, BoundednessVerdict, ComplexityProfile, MaxMeanReport,
};
use crate::error::{Error, Result};
use crate::groups::GroupKind;
use crate::meanmetric::GroupMeasure;
use crate::seeds;
use crate::systems::{DynamicalSystem, GroundTruth};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BirkhoffObservable {
    /// `f(x) = d(x, x_ref)` with a fixed sampled reference point.
    DistanceToReference,
    /// Real part of the first dictionary function.
    Character,
}

#[derive(Clone, Debug, Serialize)]
pub struct BirkhoffRow {
    pub window_index: u32,
    pub window_size: usize,
    /// Mean over start points of the window average of `f`.
    pub mean_average: f64,
    /// Max minus min of the window averages across start points.
    pub spread: f64,
}

/// Window averages `|F_n|⁻¹ Σ_g f(gx)` tracked across start points.
#[derive(Clone, Debug, Serialize)]
pub struct BirkhoffReport {
    pub system: String,
    pub family: String,
    pub observable: BirkhoffObservable,
    pub points: usize,
    pub seed: u64,
    pub rows: Vec<BirkhoffRow>,
    /// Whether the spread over start points shrank along the ladder, the
    /// ergodic-theorem signature.
    pub contracting: bool,
}

pub fn birkhoff_convergence_check(
    system: &DynamicalSystem,
    family: Option<&str>,
    n_list: &[u32],
    observable: BirkhoffObservable,
    points: usize,
    seed: u64,
) -> Result<BirkhoffReport> {
    if n_list.len() < 2 {
        return Err(Error::BadParameter {
            name: "n_list".into(),
            reason: "convergence needs at least two windows".into(),
        });
    }
    let family = family.unwrap_or_else(|| system.group.default_family());
    let sample = system.sample(points + 1, seeds::derive(seed, "birkhoff-sample"));
    let reference = sample.states[0].clone();
    let starts = &sample.states[1..];

    let dict = dictionary(system);
    let f = |x: &crate::systems::State| -> f64 {
        match observable {
            BirkhoffObservable::DistanceToReference => system.metric(x, &reference),
            BirkhoffObservable::Character => dict[0].eval(x).0,
        }
    };

    let mut rows = Vec::with_capacity(n_list.len());
    for &idx in n_list {
        let window = system.group.folner_window(family, idx)?;
        let measure = GroupMeasure::from_window(&window, None)?;
        let mut averages = Vec::with_capacity(starts.len());
        for x in starts {
            let mut acc = 0.0;
            for (g, w) in measure.support.iter().zip(&measure.weights) {
                acc += w * f(&system.apply(g, x)?);
            }
            averages.push(acc);
        }
        let mean = averages.iter().sum::<f64>() / averages.len() as f64;
        let spread = averages.iter().cloned().fold(f64::MIN, f64::max)
            - averages.iter().cloned().fold(f64::MAX, f64::min);
        rows.push(BirkhoffRow {
            window_index: idx,
            window_size: window.size(),
            mean_average: mean,
            spread,
        });
    }
    let contracting = rows[rows.len() - 1].spread <= 0.8 * rows[0].spread + 1e-9
        || rows[rows.len() - 1].spread < 0.05;
    Ok(BirkhoffReport {
        system: system.name.clone(),
        family: family.to_string(),
        observable,
        points,
        seed,
        rows,
        contracting,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationOutcome {
    Consistent,
    Inconclusive,
    Inconsistent,
}

#[derive(Clone, Debug)]
pub struct CrossValidateOptions {
    pub epsilon: f64,
    pub family: Option<String>,
    pub profile_windows: Option<Vec<u32>>,
    pub orbit_windows: Option<Vec<u32>>,
    pub orbit_epsilon: f64,
    pub maxmean_budget: usize,
    pub equicont_n_max: Option<u32>,
    pub profile_sample: usize,
    pub orbit_sample: usize,
    pub maxmean_sample: usize,
    pub equicont_sample: usize,
    pub seed: u64,
}

impl CrossValidateOptions {
    /// Defaults sized so a full run stays in the tens of seconds per
    /// system on one core.
    pub fn quick(seed: u64) -> Self {
        CrossValidateOptions {
            epsilon: 0.2,
            family: None,
            profile_windows: None,
            orbit_windows: None,
            orbit_epsilon: 0.5,
            maxmean_budget: 24,
            equicont_n_max: None,
            profile_sample: 800,
            orbit_sample: 300,
            maxmean_sample: 600,
            equicont_sample: 400,
            seed,
        }
    }
}

/// Window ladders adapted to how fast each group's windows grow.
pub fn default_profile_windows(kind: GroupKind) -> Vec<u32> {
    match kind {
        GroupKind::IntegerLine | GroupKind::RealLineFlow => vec![2, 4, 8, 16, 32],
        GroupKind::IntegerLattice(_) => vec![2, 4, 8, 16, 32],
        GroupKind::HeisenbergDiscrete => vec![1, 2, 3, 4],
        GroupKind::Lamplighter => vec![1, 2, 3, 4, 5],
    }
}

pub fn default_orbit_windows(kind: GroupKind) -> Vec<u32> {
    match kind {
        GroupKind::IntegerLine | GroupKind::RealLineFlow => vec![8, 16, 32, 64, 128],
        GroupKind::IntegerLattice(_) => vec![4, 8, 16, 32],
        GroupKind::HeisenbergDiscrete => vec![2, 3, 4, 5],
        GroupKind::Lamplighter => vec![2, 3, 4, 5],
    }
}

pub fn default_equicont_n_max(kind: GroupKind) -> u32 {
    match kind {
        GroupKind::IntegerLine | GroupKind::RealLineFlow => 128,
        GroupKind::IntegerLattice(_) => 32,
        GroupKind::HeisenbergDiscrete | GroupKind::Lamplighter => 8,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossValidation {
    pub system: String,
    pub ground_truth: GroundTruth,
    pub profile: ComplexityProfile,
    pub maxmean: MaxMeanReport,
    pub orbit_net: OrbitNetProfile,
    pub equicont: EquicontReport,
    pub outcome: ValidationOutcome,
}

/// Direction a verdict argues for: discrete spectrum (+1), against (−1),
/// or abstention (0).
fn lean_bounded(v: BoundednessVerdict) -> i8 {
    match v {
        BoundednessVerdict::Bounded => 1,
        BoundednessVerdict::Unbounded => -1,
        BoundednessVerdict::Inconclusive => 0,
    }
}

fn lean_equicont(v: EquicontVerdict) -> i8 {
    match v {
        EquicontVerdict::Equicontinuous => 1,
        EquicontVerdict::NotEquicontinuous => -1,
        EquicontVerdict::Inconclusive => 0,
    }
}

fn combine(truth: GroundTruth, leans: &[i8]) -> ValidationOutcome {
    let expected: i8 = match truth {
        GroundTruth::DiscreteSpectrum => 1,
        GroundTruth::NotDiscreteSpectrum => -1,
        GroundTruth::Unknown => 0,
    };
    if expected == 0 {
        let pro = leans.iter().any(|&l| l > 0);
        let contra = leans.iter().any(|&l| l < 0);
        return match (pro, contra) {
            (true, true) => ValidationOutcome::Inconsistent,
            (false, false) => ValidationOutcome::Inconclusive,
            _ => ValidationOutcome::Consistent,
        };
    }
    if leans.contains(&-expected) {
        ValidationOutcome::Inconsistent
    } else if leans.contains(&expected) {
        ValidationOutcome::Consistent
    } else {
        ValidationOutcome::Inconclusive
    }
}

pub fn cross_validate(
    system: &DynamicalSystem,
    opts: &CrossValidateOptions,
) -> Result<CrossValidation> {
    let kind = system.group.kind;
    let family = opts.family.as_deref();
    let profile_windows = opts
        .profile_windows
        .clone()
        .unwrap_or_else(|| default_profile_windows(kind));
    let orbit_windows = opts
        .orbit_windows
        .clone()
        .unwrap_or_else(|| default_orbit_windows(kind));
    let equicont_n_max = opts
        .equicont_n_max
        .unwrap_or_else(|| default_equicont_n_max(kind));

    let profile = folner_profile(
        system,
        family,
        &profile_windows,
        opts.epsilon,
        opts.profile_sample,
        seeds::derive(opts.seed, "xv-profile"),
    )?;
    let maxmean = max_mean_search(
        system,
        opts.epsilon,
        opts.maxmean_budget,
        opts.maxmean_sample,
        seeds::derive(opts.seed, "xv-maxmean"),
    )?;
    let orbit_net = orbit_net_profile(
        system,
        family,
        &orbit_windows,
        opts.orbit_epsilon,
        opts.orbit_sample,
        seeds::derive(opts.seed, "xv-orbitnet"),
    )?;
    // Escape distances saturate at the mean spacing of the system, which a
    // product factor can pull down toward 0.25; keep 2ε safely below that.
    let equicont = mean_equicontinuity_test(
        system,
        family,
        opts.epsilon.min(0.1),
        equicont_n_max,
        opts.equicont_sample,
        seeds::derive(opts.seed, "xv-equicont"),
    )?;

    let leans = [
        lean_bounded(profile.verdict),
        lean_bounded(maxmean.verdict),
        lean_bounded(orbit_net.verdict),
        lean_equicont(equicont.verdict),
    ];
    let outcome = combine(system.ground_truth, &leans);

    Ok(CrossValidation {
        system: system.name.clone(),
        ground_truth: system.ground_truth,
        profile,
        maxmean,
        orbit_net,
        equicont,
        outcome,
    })
}
