//! Weighted mean metrics `d_ρ(x, y) = Σ_g ρ(g) · d(gx, gy)`.
//!
//! A [`GroupMeasure`] is a finitely supported probability vector on the
//! acting group. The mean metric attached to a system and a measure is a
//! pseudometric on the phase space; complexity estimators only ever query
//! it through [`MeanKernel`], which precomputes whatever the system allows:
//!
//! * orbit traces (`gx` for every `g` in the support) for geometric states,
//! * packed bit masks for shift-like systems, where
//!   `d_ρ(x, y) = Σ_p W_p · (x_p ⊕ y_p)` over the finitely many coordinates
//!   `p = b·e` read by the truncated sequence metric along the support,
//! * a pair of kernels for diagonal product systems.
//!
//! Ball tests are strict (`d < ε`) and exit early once the partial sum
//! crosses the bound, which is what makes greedy covering affordable.

use crate::error::{Error, Result};
use crate::exec;
use crate::groups::{FolnerWindow, GroupElement, WindowContent};
use crate::systems::{DynamicalSystem, PointSample, SeqWindow, State, SystemKind};
use std::collections::BTreeMap;

/// Maximum support size used when a Følner window is turned into a
/// measure; larger windows are subsampled by a fixed stride.
pub const SUPPORT_CAP: usize = 512;

/// A finitely supported probability measure on the group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupMeasure {
    pub support: Vec<GroupElement>,
    pub weights: Vec<f64>,
    pub label: String,
    /// Set when the support was subsampled from a larger window.
    pub thinned: bool,
}

impl GroupMeasure {
    /// Normalizing constructor. Rejects empty or non-summable weights.
    pub fn new(
        support: Vec<GroupElement>,
        weights: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::EmptySupport);
        }
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::EmptySupport);
        }
        Ok(GroupMeasure {
            support,
            weights: weights.into_iter().map(|w| w / total).collect(),
            label: label.into(),
            thinned: false,
        })
    }

    pub fn dirac(g: GroupElement) -> Self {
        GroupMeasure {
            support: vec![g],
            weights: vec![1.0],
            label: "dirac".into(),
            thinned: false,
        }
    }

    pub fn uniform_on(support: Vec<GroupElement>, label: impl Into<String>) -> Result<Self> {
        let n = support.len();
        Self::new(support, vec![1.0; n], label)
    }

    /// Normalized counting (or trapezoid, for flows) measure on a Følner
    /// window, subsampled by a stride when the window exceeds `cap`
    /// (default [`SUPPORT_CAP`]).
    pub fn from_window(window: &FolnerWindow, cap: Option<usize>) -> Result<Self> {
        let cap = cap.unwrap_or(SUPPORT_CAP).max(2);
        let label = format!("folner:{}:{}", window.family, window.index);
        match &window.content {
            WindowContent::Discrete(elements) => {
                let stride = elements.len().div_ceil(cap);
                let support: Vec<GroupElement> = elements.iter().step_by(stride).cloned().collect();
                let mut measure = Self::uniform_on(support, label)?;
                measure.thinned = stride > 1;
                Ok(measure)
            }
            WindowContent::Interval { t_end, step } => {
                let nodes = ((t_end / step).round() as usize).max(1);
                let stride = (nodes + 1).div_ceil(cap);
                let mut support = Vec::new();
                let mut weights = Vec::new();
                let mut k = 0usize;
                while k <= nodes {
                    support.push(GroupElement::real(k as f64 * step));
                    // trapezoid rule on the strided grid: half weight at ends
                    let end = k == 0 || k + stride > nodes;
                    weights.push(if end { 0.5 } else { 1.0 });
                    k += stride;
                }
                let mut measure = Self::new(support, weights, label)?;
                measure.thinned = stride > 1;
                Ok(measure)
            }
        }
    }

    /// Convex mixture; equal supports are merged.
    pub fn mixture(parts: &[(GroupMeasure, f64)]) -> Result<Self> {
        let mut merged: BTreeMap<GroupElement, f64> = BTreeMap::new();
        for (measure, mass) in parts {
            if *mass < 0.0 {
                return Err(Error::EmptySupport);
            }
            for (g, w) in measure.support.iter().zip(&measure.weights) {
                *merged.entry(g.clone()).or_insert(0.0) += mass * w;
            }
        }
        let (support, weights): (Vec<_>, Vec<_>) = merged.into_iter().unzip();
        Self::new(support, weights, "mixture")
    }

    /// The right translate `ρ_{Eh}`: same weights on `g·h`.
    pub fn right_translate(&self, sys: &DynamicalSystem, h: &GroupElement) -> Result<Self> {
        let support = self
            .support
            .iter()
            .map(|g| sys.group.compose(g, h))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupMeasure {
            support,
            weights: self.weights.clone(),
            label: format!("{}*h", self.label),
            thinned: self.thinned,
        })
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

/// Mean distance between two explicit points, computed directly from the
/// definition. Estimators should prefer [`MeanKernel`].
pub fn mean_distance(
    sys: &DynamicalSystem,
    measure: &GroupMeasure,
    x: &State,
    y: &State,
) -> Result<f64> {
    let mut acc = 0.0;
    for (g, w) in measure.support.iter().zip(&measure.weights) {
        acc += w * sys.metric(&sys.apply(g, x)?, &sys.apply(g, y)?);
    }
    Ok(acc)
}

/// Strict mean-metric ball test `d_ρ(x, y) < ε` with early exit.
pub fn in_ball(
    sys: &DynamicalSystem,
    measure: &GroupMeasure,
    x: &State,
    y: &State,
    epsilon: f64,
) -> Result<bool> {
    let mut acc = 0.0;
    for (g, w) in measure.support.iter().zip(&measure.weights) {
        acc += w * sys.metric(&sys.apply(g, x)?, &sys.apply(g, y)?);
        if acc >= epsilon {
            return Ok(false);
        }
    }
    Ok(acc < epsilon)
}

enum KernelImpl {
    /// Orbit traces: `traces[j][i] = g_i · x_j`, one metric call per term.
    Orbit {
        sys: DynamicalSystem,
        traces: Vec<Vec<State>>,
        weights: Vec<f64>,
    },
    /// Packed coordinate masks with per-position weights (padded to the
    /// word size with zeros).
    Masks {
        words: Vec<Vec<u64>>,
        pos_weights: Vec<f64>,
    },
    /// Coordinatewise max over a diagonal product.
    Pair(Box<KernelImpl>, Box<KernelImpl>),
}

/// Precomputed pairwise evaluator for `d_ρ` on a fixed sample.
pub struct MeanKernel {
    imp: KernelImpl,
    len: usize,
}

impl MeanKernel {
    pub fn build(
        sys: &DynamicalSystem,
        measure: &GroupMeasure,
        sample: &PointSample,
    ) -> Result<MeanKernel> {
        let imp = build_impl(sys, measure, &sample.states)?;
        Ok(MeanKernel {
            imp,
            len: sample.states.len(),
        })
    }

    /// Number of sample points.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `d_ρ(x_j, x_k)`.
    pub fn dist(&self, j: usize, k: usize) -> f64 {
        dist_impl(&self.imp, j, k, f64::INFINITY)
    }

    /// Strict ball test `d_ρ(x_j, x_k) < bound` with early exit.
    pub fn dist_lt(&self, j: usize, k: usize, bound: f64) -> bool {
        dist_impl(&self.imp, j, k, bound) < bound
    }
}

/// Shift window used by the mask kernel, when the system has one.
fn mask_window(sys: &DynamicalSystem) -> Option<SeqWindow> {
    match &sys.kind {
        SystemKind::Bernoulli { window } => Some(window.clone()),
        SystemKind::Sturmian { .. } => sys.sturmian_window(),
        _ => None,
    }
}

fn build_impl(
    sys: &DynamicalSystem,
    measure: &GroupMeasure,
    states: &[State],
) -> Result<KernelImpl> {
    if let SystemKind::Product { base } = &sys.kind {
        let mut left = Vec::with_capacity(states.len());
        let mut right = Vec::with_capacity(states.len());
        for s in states {
            match s {
                State::Pair(a, b) => {
                    left.push((**a).clone());
                    right.push((**b).clone());
                }
                _ => return Err(Error::Unsupported("product state expected".into())),
            }
        }
        return Ok(KernelImpl::Pair(
            Box::new(build_impl(base, measure, &left)?),
            Box::new(build_impl(base, measure, &right)?),
        ));
    }

    if let Some(window) = mask_window(sys) {
        return build_masks(sys, measure, &window, states);
    }

    // geometric fallback: precomputed orbits, one metric call per term
    let traces = exec::map_slice(states, |x| {
        measure
            .support
            .iter()
            .map(|g| sys.apply(g, x))
            .collect::<Result<Vec<State>>>()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(KernelImpl::Orbit {
        sys: sys.clone(),
        traces,
        weights: measure.weights.clone(),
    })
}

fn build_masks(
    sys: &DynamicalSystem,
    measure: &GroupMeasure,
    window: &SeqWindow,
    states: &[State],
) -> Result<KernelImpl> {
    // collapse b·e over (metric window × measure support) into weighted
    // positions: d_ρ(x, y) = Σ_p W_p (x_p ⊕ y_p)
    let mut index: BTreeMap<GroupElement, usize> = BTreeMap::new();
    let mut positions: Vec<GroupElement> = Vec::new();
    let mut pos_weights: Vec<f64> = Vec::new();
    for (e, we) in measure.support.iter().zip(&measure.weights) {
        for (b, wb) in window.elements.iter().zip(&window.weights) {
            let p = sys.group.compose(b, e)?;
            match index.get(&p) {
                Some(&i) => pos_weights[i] += we * wb,
                None => {
                    index.insert(p.clone(), positions.len());
                    positions.push(p);
                    pos_weights.push(we * wb);
                }
            }
        }
    }
    let padded = positions.len().div_ceil(64) * 64;
    pos_weights.resize(padded, 0.0);

    let words = exec::map_slice(states, |x| {
        let mut row = vec![0u64; padded / 64];
        for (i, p) in positions.iter().enumerate() {
            if sys.sequence_bit(x, p).expect("shift state") {
                row[i / 64] |= 1 << (i % 64);
            }
        }
        row
    });
    Ok(KernelImpl::Masks { words, pos_weights })
}

/// Accumulate `d_ρ(x_j, x_k)`, stopping once the sum reaches `bound`.
fn dist_impl(imp: &KernelImpl, j: usize, k: usize, bound: f64) -> f64 {
    match imp {
        KernelImpl::Orbit {
            sys,
            traces,
            weights,
        } => {
            if j == k {
                return 0.0;
            }
            let (tj, tk) = (&traces[j], &traces[k]);
            let mut acc = 0.0;
            for i in 0..weights.len() {
                acc += weights[i] * sys.metric(&tj[i], &tk[i]);
                if acc >= bound {
                    return acc;
                }
            }
            acc
        }
        KernelImpl::Masks { words, pos_weights } => {
            let (wj, wk) = (&words[j], &words[k]);
            let mut acc = 0.0;
            for (w, (a, b)) in wj.iter().zip(wk).enumerate() {
                let mut x = a ^ b;
                while x != 0 {
                    acc += pos_weights[w * 64 + x.trailing_zeros() as usize];
                    if acc >= bound {
                        return acc;
                    }
                    x &= x - 1;
                }
            }
            acc
        }
        KernelImpl::Pair(a, b) => {
            let da = dist_impl(a, j, k, bound);
            if da >= bound {
                return da;
            }
            da.max(dist_impl(b, j, k, bound))
        }
    }
}
