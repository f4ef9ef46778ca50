//! Built-in measure-preserving systems.
//!
//! Every system fixes a group action `G ↷ X`, a metric of diameter one, an
//! invariant Borel probability measure `μ` (used only through its sampler),
//! and a ground-truth spectral label used for cross-validation:
//!
//! | name                | group  | ground truth        | isometric |
//! |---------------------|--------|---------------------|-----------|
//! | `rotation`          | Z      | discrete spectrum   | yes       |
//! | `torus-rotation`    | Z^2    | discrete spectrum   | yes       |
//! | `kronecker-flow`    | R-flow | discrete spectrum   | yes       |
//! | `odometer`          | Z      | discrete spectrum   | yes       |
//! | `sturmian`          | Z      | discrete spectrum   | no        |
//! | `bernoulli-shift:G` | G      | not discrete        | no        |
//! | `skew-product`      | Z      | not discrete        | no        |
//!
//! Shift spaces `{0,1}^G` use the diameter-one sequence metric
//! `d(x, y) = Z⁻¹ Σ_g 2^{-|g|} |x_g − y_g|` truncated to the word ball
//! `|g| < L`; the shift convention is `(g·x)(h) = x(hg)`, which on `Z` reads
//! `(g·x)_n = x_{n+g}`. Bernoulli points are sampled lazily: a point is a
//! 64-bit seed plus a translate, and coordinate bits come from a stable hash,
//! so arbitrary translates stay exact and O(1).

mod registry;

pub use registry::{list_systems, parse_system, SystemDescriptor};

use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};
use crate::seeds;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const GOLDEN: f64 = 0.618_033_988_749_894_9;
pub const SQRT2_FRAC: f64 = std::f64::consts::SQRT_2 - 1.0;

/// Spectral ground truth attached to each built-in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroundTruth {
    DiscreteSpectrum,
    NotDiscreteSpectrum,
    Unknown,
}

/// A point of the phase space, in the encoding of its system.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    /// Point of the circle `[0, 1)`.
    Circle(f64),
    /// Point of the 2-torus.
    Torus(f64, f64),
    /// A 64-digit binary adding-machine state, digit `i = bit i`.
    Digits(u64),
    /// Lazy `{0,1}^G` point: coordinate `h` is a stable hash bit of
    /// `(seed, h·shift)`.
    Cell { seed: u64, shift: GroupElement },
    /// Explicit `{0,1}^G` point with finitely many ones (for tests and
    /// hand-built configurations). Sorted, deduplicated.
    CellExplicit { ones: Vec<GroupElement> },
    /// Point of a diagonal product system.
    Pair(Box<State>, Box<State>),
}

impl State {
    pub fn cell_explicit(mut ones: Vec<GroupElement>) -> Self {
        ones.sort();
        ones.dedup();
        State::CellExplicit { ones }
    }
}

/// Truncated sequence-metric window: the word ball `|g| < L` with weights
/// `2^{-|g|} / Z`, `Z = Σ 2^{-|g|}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqWindow {
    pub elements: Vec<GroupElement>,
    pub weights: Vec<f64>,
    pub z: f64,
    pub truncation: u32,
}

impl SeqWindow {
    pub fn build(group: &GroupSpec, truncation: u32) -> Result<Self> {
        if truncation < 2 {
            return Err(Error::BadParameter {
                name: "L".into(),
                reason: "truncation must be at least 2".into(),
            });
        }
        let ball = group.word_ball(truncation - 1)?;
        // Each radius-r sphere shares total raw weight 2^{-r}. Per-element
        // decay would spread the mass over the (fast-growing) spheres of 2D
        // and nonabelian balls and push all pair distances toward 1/2; the
        // radial split keeps the origin cell dominant for every geometry.
        let mut sphere_sizes = vec![0usize; truncation as usize];
        for (_, len) in &ball {
            sphere_sizes[*len as usize] += 1;
        }
        let mut elements = Vec::with_capacity(ball.len());
        let mut raw = Vec::with_capacity(ball.len());
        for (g, len) in ball {
            elements.push(g);
            raw.push(0.5f64.powi(len as i32) / sphere_sizes[len as usize] as f64);
        }
        let z: f64 = raw.iter().sum();
        let weights = raw.into_iter().map(|w| w / z).collect();
        Ok(SeqWindow {
            elements,
            weights,
            z,
            truncation,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SystemKind {
    Rotation { alpha: f64 },
    TorusRotation { alpha1: f64, alpha2: f64 },
    KroneckerFlow { omega1: f64, omega2: f64 },
    Odometer,
    Sturmian { alpha: f64 },
    Bernoulli { window: SeqWindow },
    SkewProduct { alpha: f64 },
    Product { base: Box<DynamicalSystem> },
}

/// A sampled batch of `μ`-distributed points; all estimators consume these.
#[derive(Clone, Debug)]
pub struct PointSample {
    pub states: Vec<State>,
    pub seed: u64,
}

impl PointSample {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicalSystem {
    pub name: String,
    pub group: GroupSpec,
    pub kind: SystemKind,
    pub ground_truth: GroundTruth,
    /// True when the action preserves the metric exactly; consumers may not
    /// shortcut on it, but reports carry it.
    pub isometric: bool,
}

fn frac(x: f64) -> f64 {
    x.rem_euclid(1.0)
}

/// Diameter-one circle metric `2 · min(|x−y|, 1−|x−y|)`.
pub fn circle_dist(x: f64, y: f64) -> f64 {
    let t = frac(x - y);
    2.0 * t.min(1.0 - t)
}

impl DynamicalSystem {
    /// Apply the group element to a point.
    pub fn apply(&self, g: &GroupElement, x: &State) -> Result<State> {
        match (&self.kind, g, x) {
            (SystemKind::Rotation { alpha }, GroupElement::Int(n), State::Circle(t)) => {
                Ok(State::Circle(frac(t + *n as f64 * alpha)))
            }
            (SystemKind::Sturmian { alpha }, GroupElement::Int(n), State::Circle(t)) => {
                Ok(State::Circle(frac(t + *n as f64 * alpha)))
            }
            (
                SystemKind::TorusRotation { alpha1, alpha2 },
                GroupElement::Vec(v),
                State::Torus(t, u),
            ) if v.len() == 2 => Ok(State::Torus(
                frac(t + v[0] as f64 * alpha1),
                frac(u + v[1] as f64 * alpha2),
            )),
            (
                SystemKind::KroneckerFlow { omega1, omega2 },
                GroupElement::Real(s),
                State::Torus(t, u),
            ) => Ok(State::Torus(frac(t + s.0 * omega1), frac(u + s.0 * omega2))),
            (SystemKind::Odometer, GroupElement::Int(n), State::Digits(d)) => {
                Ok(State::Digits(d.wrapping_add_signed(*n)))
            }
            (SystemKind::SkewProduct { alpha }, GroupElement::Int(n), State::Torus(t, u)) => {
                // T(x, y) = (x + α, y + x); iterating gives the closed form
                // Tⁿ(x, y) = (x + nα, y + nx + n(n−1)/2 · α), valid for all n.
                let n = *n;
                let nf = n as f64;
                let binom = (n * (n - 1) / 2) as f64;
                Ok(State::Torus(
                    frac(t + nf * alpha),
                    frac(u + nf * t + binom * alpha),
                ))
            }
            (SystemKind::Bernoulli { .. }, _, State::Cell { seed, shift }) => Ok(State::Cell {
                seed: *seed,
                shift: self.group.compose(g, shift)?,
            }),
            (SystemKind::Bernoulli { .. }, _, State::CellExplicit { ones }) => {
                let g_inv = self.group.inverse(g)?;
                let moved = ones
                    .iter()
                    .map(|p| self.group.compose(p, &g_inv))
                    .collect::<Result<Vec<_>>>()?;
                Ok(State::cell_explicit(moved))
            }
            (SystemKind::Product { base }, _, State::Pair(a, b)) => Ok(State::Pair(
                Box::new(base.apply(g, a)?),
                Box::new(base.apply(g, b)?),
            )),
            _ => Err(Error::Unsupported(format!(
                "cannot apply {g} to this state in system {}",
                self.name
            ))),
        }
    }

    /// Coordinate read for shift-like systems: the bit of `x` at position
    /// `pos`. Sturmian points read through the rotation coding
    /// `x_i = 1 ⇔ frac(θ + iα) ∈ [1−α, 1)`.
    pub fn sequence_bit(&self, x: &State, pos: &GroupElement) -> Result<bool> {
        match (&self.kind, x) {
            (SystemKind::Bernoulli { .. }, State::Cell { seed, shift }) => {
                let site = self.group.compose(pos, shift)?;
                Ok(seeds::mix(*seed, site.stable_mix()) & 1 == 1)
            }
            (SystemKind::Bernoulli { .. }, State::CellExplicit { ones }) => {
                Ok(ones.binary_search(pos).is_ok())
            }
            (SystemKind::Sturmian { alpha }, State::Circle(t)) => match pos {
                GroupElement::Int(i) => Ok(frac(t + *i as f64 * alpha) >= 1.0 - alpha),
                _ => Err(self.group.mismatch(pos)),
            },
            _ => Err(Error::Unsupported(format!(
                "system {} has no coordinate reads",
                self.name
            ))),
        }
    }

    /// The sequence window of a shift-like system, if any.
    pub fn seq_window(&self) -> Option<&SeqWindow> {
        match &self.kind {
            SystemKind::Bernoulli { window } => Some(window),
            _ => None,
        }
    }

    /// For Sturmian systems the metric window is synthesized on demand.
    pub(crate) fn sturmian_window(&self) -> Option<SeqWindow> {
        match &self.kind {
            SystemKind::Sturmian { .. } => Some(SeqWindow::build(&self.group, 12).expect("Z ball")),
            _ => None,
        }
    }

    /// The metric. Diameter is one for every built-in.
    pub fn metric(&self, x: &State, y: &State) -> f64 {
        match (&self.kind, x, y) {
            (SystemKind::Rotation { .. }, State::Circle(a), State::Circle(b)) => {
                circle_dist(*a, *b)
            }
            (
                SystemKind::TorusRotation { .. } | SystemKind::KroneckerFlow { .. },
                State::Torus(a1, a2),
                State::Torus(b1, b2),
            ) => circle_dist(*a1, *b1).max(circle_dist(*a2, *b2)),
            (SystemKind::Odometer, State::Digits(a), State::Digits(b)) => {
                if a == b {
                    0.0
                } else {
                    0.5f64.powi((a ^ b).trailing_zeros() as i32)
                }
            }
            (SystemKind::SkewProduct { .. }, State::Torus(a1, a2), State::Torus(b1, b2)) => {
                0.5 * (circle_dist(*a1, *b1) + circle_dist(*a2, *b2))
            }
            (SystemKind::Sturmian { .. }, _, _) => {
                let window = self.sturmian_window().expect("sturmian");
                self.seq_metric(&window, x, y)
            }
            (SystemKind::Bernoulli { window }, _, _) => self.seq_metric(window, x, y),
            (SystemKind::Product { base }, State::Pair(a1, a2), State::Pair(b1, b2)) => {
                base.metric(a1, b1).max(base.metric(a2, b2))
            }
            _ => panic!("metric: state does not belong to system {}", self.name),
        }
    }

    fn seq_metric(&self, window: &SeqWindow, x: &State, y: &State) -> f64 {
        let mut acc = 0.0;
        for (g, w) in window.elements.iter().zip(&window.weights) {
            let bx = self.sequence_bit(x, g).expect("shift state");
            let by = self.sequence_bit(y, g).expect("shift state");
            if bx != by {
                acc += w;
            }
        }
        acc
    }

    /// Draw `count` i.i.d. `μ`-distributed points. Deterministic in `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> PointSample {
        let mut rng = seeds::rng(seeds::derive(seed, "sample"));
        let states = (0..count).map(|_| self.draw(&mut rng)).collect();
        PointSample { states, seed }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> State {
        match &self.kind {
            SystemKind::Rotation { .. } | SystemKind::Sturmian { .. } => {
                State::Circle(rng.random::<f64>())
            }
            SystemKind::TorusRotation { .. }
            | SystemKind::KroneckerFlow { .. }
            | SystemKind::SkewProduct { .. } => {
                State::Torus(rng.random::<f64>(), rng.random::<f64>())
            }
            SystemKind::Odometer => State::Digits(rng.random::<u64>()),
            SystemKind::Bernoulli { .. } => State::Cell {
                seed: rng.random::<u64>(),
                shift: self.group.identity(),
            },
            SystemKind::Product { base } => {
                State::Pair(Box::new(base.draw(rng)), Box::new(base.draw(rng)))
            }
        }
    }

    /// Diagonal product with itself: max metric, product measure via
    /// independent coordinates. Preserves the spectral ground truth (a
    /// product of discrete-spectrum measures is discrete; a product with a
    /// non-discrete factor is not, since factors of discrete-spectrum
    /// systems have discrete spectrum).
    pub fn product_lift(&self) -> DynamicalSystem {
        DynamicalSystem {
            name: format!("product({})", self.name),
            group: self.group.clone(),
            ground_truth: self.ground_truth,
            isometric: self.isometric,
            kind: SystemKind::Product {
                base: Box::new(self.clone()),
            },
        }
    }
}

/// `|E_N f − E_N (f ∘ g)|` on a fresh sample: a sanity check that the
/// sampler really is invariant for the action. Values should sit within a
/// few `sup|f| / √N`.
pub fn invariance_check<F>(
    system: &DynamicalSystem,
    g: &GroupElement,
    f: F,
    count: usize,
    seed: u64,
) -> Result<f64>
where
    F: Fn(&State) -> (f64, f64),
{
    let sample = system.sample(count, seeds::derive(seed, "invariance"));
    let mut dre = 0.0;
    let mut dim = 0.0;
    for x in &sample.states {
        let (re0, im0) = f(x);
        let gx = system.apply(g, x)?;
        let (re1, im1) = f(&gx);
        dre += re0 - re1;
        dim += im0 - im1;
    }
    let n = count as f64;
    Ok((dre / n).hypot(dim / n))
}
