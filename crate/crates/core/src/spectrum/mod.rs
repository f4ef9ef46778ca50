//! Spectral diagnostics in `L²(μ)`.
//!
//! A measure has discrete spectrum exactly when every orbit
//! `{f ∘ g : g ∈ G}` of an observable is totally bounded in `L²`, so the
//! estimators here work with a small dictionary of complex test functions
//! per system and measure how fast greedy `ε`-nets of the orbit grow along
//! Følner windows. Eigenfunction orbits settle onto circles and the net
//! count freezes; weakly mixing directions keep every translate at
//! distance `√2 · ‖f‖` and the count tracks the window size.

pub mod equicont;
pub mod validate;

pub use equicont::{
    equicontinuity_in_mean_test, mean_equicontinuity_test, DeltaRow, EquicontMode, EquicontReport,
    EquicontVerdict,
};
pub use validate::{
    birkhoff_convergence_check, cross_validate, default_equicont_n_max, default_orbit_windows,
    default_profile_windows, BirkhoffObservable, BirkhoffReport, BirkhoffRow, CrossValidateOptions,
    CrossValidation, ValidationOutcome,
};

use crate::complexity::{boundedness_verdict, BoundednessVerdict};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, WindowContent};
use crate::seeds;
use crate::systems::{DynamicalSystem, PointSample, State, SystemKind};
use serde::Serialize;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Orbit nets enumerate at most this many translates per window; larger
/// windows are cut to their leading shells (windows are nested by
/// construction, so this keeps prefixes comparable).
pub const NET_CANDIDATE_CAP: usize = 256;

type EvalFn = Arc<dyn Fn(&State) -> (f64, f64) + Send + Sync>;

/// A named complex observable on the phase space.
#[derive(Clone)]
pub struct TestFunction {
    pub name: String,
    eval: EvalFn,
}

impl TestFunction {
    pub fn new(name: impl Into<String>, eval: EvalFn) -> Self {
        TestFunction {
            name: name.into(),
            eval,
        }
    }

    pub fn eval(&self, x: &State) -> (f64, f64) {
        (self.eval)(x)
    }
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .finish()
    }
}

fn character(k: f64) -> EvalFn {
    Arc::new(move |x| match x {
        State::Circle(t) => ((TAU * k * t).cos(), (TAU * k * t).sin()),
        _ => (0.0, 0.0),
    })
}

fn torus_character(k1: f64, k2: f64) -> EvalFn {
    Arc::new(move |x| match x {
        State::Torus(t, u) => {
            let phase = TAU * (k1 * t + k2 * u);
            (phase.cos(), phase.sin())
        }
        _ => (0.0, 0.0),
    })
}

fn digit_character(k: u32) -> EvalFn {
    let modulus = 1u64 << k;
    Arc::new(move |x| match x {
        State::Digits(d) => {
            let phase = TAU * (d % modulus) as f64 / modulus as f64;
            (phase.cos(), phase.sin())
        }
        _ => (0.0, 0.0),
    })
}

/// `±1` cylinder read at a fixed set of coordinates (their product).
fn cylinder(sys: DynamicalSystem, sites: Vec<GroupElement>) -> EvalFn {
    Arc::new(move |x| {
        let mut v = 1.0;
        for site in &sites {
            let bit = sys.sequence_bit(x, site).expect("shift state");
            v *= if bit { -1.0 } else { 1.0 };
        }
        (v, 0.0)
    })
}

fn lift(side: usize, f: TestFunction) -> TestFunction {
    let name = if side == 0 {
        format!("left:{}", f.name)
    } else {
        format!("right:{}", f.name)
    };
    let inner = f.eval.clone();
    TestFunction::new(
        name,
        Arc::new(move |x| match x {
            State::Pair(a, b) => inner(if side == 0 { a } else { b }),
            _ => (0.0, 0.0),
        }),
    )
}

/// The observable dictionary of a system: a few characters or cylinder
/// functions, enough to separate eigenfunction orbits from mixing ones.
pub fn dictionary(sys: &DynamicalSystem) -> Vec<TestFunction> {
    match &sys.kind {
        SystemKind::Rotation { .. } | SystemKind::Sturmian { .. } => vec![
            TestFunction::new("char:1", character(1.0)),
            TestFunction::new("char:2", character(2.0)),
            TestFunction::new("char:3", character(3.0)),
        ],
        SystemKind::TorusRotation { .. }
        | SystemKind::KroneckerFlow { .. }
        | SystemKind::SkewProduct { .. } => vec![
            TestFunction::new("char:(1,0)", torus_character(1.0, 0.0)),
            TestFunction::new("char:(0,1)", torus_character(0.0, 1.0)),
            TestFunction::new("char:(1,1)", torus_character(1.0, 1.0)),
        ],
        SystemKind::Odometer => vec![
            TestFunction::new("digit-char:1", digit_character(1)),
            TestFunction::new("digit-char:2", digit_character(2)),
            TestFunction::new("digit-char:3", digit_character(3)),
        ],
        SystemKind::Bernoulli { .. } => {
            let e = sys.group.identity();
            let s = sys.group.generators[0].clone();
            let s2 = sys.group.compose(&s, &s).expect("generator");
            vec![
                TestFunction::new("cyl:origin", cylinder(sys.clone(), vec![e.clone()])),
                TestFunction::new("cyl:pair", cylinder(sys.clone(), vec![e.clone(), s])),
                TestFunction::new("cyl:skip", cylinder(sys.clone(), vec![e, s2])),
            ]
        }
        SystemKind::Product { base } => {
            let inner = dictionary(base);
            let mut out = Vec::with_capacity(inner.len() * 2);
            for f in inner.iter().cloned() {
                out.push(lift(0, f));
            }
            for f in inner.into_iter() {
                out.push(lift(1, f));
            }
            out
        }
    }
}

/// Empirical `L²(μ)` distance between the translates `f ∘ a` and `f ∘ b`.
pub fn l2_distance(
    sys: &DynamicalSystem,
    f: &TestFunction,
    a: &GroupElement,
    b: &GroupElement,
    sample: &PointSample,
) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut acc = 0.0;
    for x in &sample.states {
        let (re_a, im_a) = f.eval(&sys.apply(a, x)?);
        let (re_b, im_b) = f.eval(&sys.apply(b, x)?);
        acc += (re_a - re_b).powi(2) + (im_a - im_b).powi(2);
    }
    Ok((acc / sample.len() as f64).sqrt())
}

/// One window row of an orbit-net profile.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitNetRow {
    pub window_index: u32,
    pub window_size: usize,
    /// Translates actually enumerated (capped at [`NET_CANDIDATE_CAP`]).
    pub candidates: usize,
    pub truncated: bool,
    pub net_size: usize,
}

/// Greedy `ε`-net sizes of dictionary orbits along Følner windows.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitNetProfile {
    pub system: String,
    pub family: String,
    pub epsilon: f64,
    pub sample_size: usize,
    pub seed: u64,
    pub dictionary: Vec<String>,
    pub rows: Vec<OrbitNetRow>,
    pub verdict: BoundednessVerdict,
}

impl OrbitNetProfile {
    pub fn counts(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.net_size).collect()
    }
}

/// Group elements of a window in enumeration order (nested across `n`).
fn window_elements(sys: &DynamicalSystem, family: &str, n: u32) -> Result<Vec<GroupElement>> {
    let window = sys.group.folner_window(family, n)?;
    match window.content {
        WindowContent::Discrete(elements) => Ok(elements),
        WindowContent::Interval { t_end, step } => {
            let nodes = (t_end / step).round() as usize;
            Ok((0..=nodes)
                .map(|k| GroupElement::real(k as f64 * step))
                .collect())
        }
    }
}

/// Track greedy `ε`-net growth of `{f ∘ g : f ∈ dictionary, g ∈ F_n}` in
/// empirical `L²` along the window sequence. Windows are prefixes of each
/// other, so one pass over the largest window serves every row.
pub fn orbit_net_profile(
    sys: &DynamicalSystem,
    family: Option<&str>,
    n_list: &[u32],
    epsilon: f64,
    sample_size: usize,
    seed: u64,
) -> Result<OrbitNetProfile> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::BadParameter {
            name: "epsilon".into(),
            reason: format!("must be positive, got {epsilon}"),
        });
    }
    if n_list.is_empty() {
        return Err(Error::BadParameter {
            name: "n_list".into(),
            reason: "at least one window index is required".into(),
        });
    }
    let family = family.unwrap_or_else(|| sys.group.default_family());
    let mut order: Vec<u32> = n_list.to_vec();
    order.sort_unstable();
    order.dedup();

    let sample = sys.sample(sample_size, seeds::derive(seed, "orbitnet-sample"));
    let dict = dictionary(sys);
    let n = sample.len() as f64;
    let eps_sq_scaled = epsilon * epsilon * n;

    // per-window candidate boundaries within the shared prefix enumeration
    let mut boundaries = Vec::with_capacity(order.len());
    let mut sizes = Vec::with_capacity(order.len());
    for &idx in &order {
        let size = sys.group.folner_window(family, idx)?.size();
        sizes.push(size);
        boundaries.push(size.min(NET_CANDIDATE_CAP));
    }
    let top = *boundaries.last().expect("nonempty");
    let elements = window_elements(sys, family, *order.last().expect("nonempty"))?;
    let elements = &elements[..top.min(elements.len())];

    let mut net: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut net_at_boundary = vec![0usize; order.len()];
    for (i, g) in elements.iter().enumerate() {
        for f in &dict {
            let mut v = Vec::with_capacity(sample.len());
            for x in &sample.states {
                v.push(f.eval(&sys.apply(g, x)?));
            }
            let mut near = false;
            'members: for w in &net {
                let mut acc = 0.0;
                for ((ar, ai), (br, bi)) in v.iter().zip(w) {
                    acc += (ar - br).powi(2) + (ai - bi).powi(2);
                    if acc >= eps_sq_scaled {
                        continue 'members;
                    }
                }
                near = true;
                break;
            }
            if !near {
                net.push(v);
            }
        }
        for (b, &boundary) in boundaries.iter().enumerate() {
            if i + 1 == boundary {
                net_at_boundary[b] = net.len();
            }
        }
    }

    let rows: Vec<OrbitNetRow> = order
        .iter()
        .enumerate()
        .map(|(b, &idx)| OrbitNetRow {
            window_index: idx,
            window_size: sizes[b],
            candidates: boundaries[b],
            truncated: sizes[b] > boundaries[b],
            net_size: net_at_boundary[b],
        })
        .collect();

    let counts: Vec<usize> = rows.iter().map(|r| r.net_size).collect();
    let last = rows.last().expect("nonempty");
    // a net pinned to its truncated candidate budget says the count was
    // still tracking the window, not settling
    let pinned = last.truncated && last.net_size * 10 >= last.candidates * dict.len() * 9;
    let verdict = if pinned {
        if counts.windows(2).all(|w| w[1] >= w[0]) && counts[counts.len() - 1] > counts[0] {
            BoundednessVerdict::Unbounded
        } else {
            BoundednessVerdict::Inconclusive
        }
    } else {
        boundedness_verdict(&counts)
    };

    Ok(OrbitNetProfile {
        system: sys.name.clone(),
        family: family.to_string(),
        epsilon,
        sample_size,
        seed,
        dictionary: dict.into_iter().map(|f| f.name).collect(),
        rows,
        verdict,
    })
}
