//! Discrete amenable groups and the one-parameter flow used by the built-in
//! systems, together with word-length balls and Følner machinery.
//!
//! Supported groups, with their stable registry names:
//! - `Z`: the integer line;
//! - `Z^d`: integer lattices (`Z^2` is what the built-ins use);
//! - `heis3`: the discrete Heisenberg group, triples `(a, b, c)` encoding
//!   the upper unitriangular matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]`;
//! - `lamplighter`: the wreath product `(Z/2) ≀ Z`, a finite set of lit
//!   lamps plus a cursor;
//! - `R-flow`: the additive reals, acting through time-`t` maps.
//!
//! Elements carry their own encoding; a [`GroupSpec`] pins the group and its
//! generating set (used for word length, hence for truncated sequence
//! metrics) and exposes composition, inversion and Følner windows.

mod folner;

pub use folner::{FolnerWindow, ShulmanReport, ShulmanRow, WindowContent};

use crate::error::{Error, Result};
use ordered_float::OrderedFloat;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Which group a spec describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    IntegerLine,
    IntegerLattice(u8),
    HeisenbergDiscrete,
    Lamplighter,
    RealLineFlow,
}

/// A group element in the encoding of its group.
///
/// `Lamp.lamps` is kept sorted and duplicate-free; construct through
/// [`GroupElement::lamp`] to maintain that. `Real` wraps [`OrderedFloat`] so
/// elements stay `Eq + Hash` for window enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupElement {
    Int(i64),
    Vec(Vec<i64>),
    Heis { a: i64, b: i64, c: i64 },
    Lamp { lamps: Vec<i64>, cursor: i64 },
    Real(OrderedFloat<f64>),
}

impl GroupElement {
    pub fn int(n: i64) -> Self {
        GroupElement::Int(n)
    }

    pub fn vec2(a: i64, b: i64) -> Self {
        GroupElement::Vec(vec![a, b])
    }

    pub fn heis(a: i64, b: i64, c: i64) -> Self {
        GroupElement::Heis { a, b, c }
    }

    /// Canonicalizes the lamp set (sorted, deduplicated).
    pub fn lamp(mut lamps: Vec<i64>, cursor: i64) -> Self {
        lamps.sort_unstable();
        lamps.dedup();
        GroupElement::Lamp { lamps, cursor }
    }

    pub fn real(t: f64) -> Self {
        GroupElement::Real(OrderedFloat(t))
    }

    /// Stable 64-bit mix of the element, used to derive i.i.d. coordinate
    /// bits for shift systems. Must never change across releases.
    pub fn stable_mix(&self) -> u64 {
        use crate::seeds::mix;
        match self {
            GroupElement::Int(n) => mix(0x11, *n as u64),
            GroupElement::Vec(v) => {
                let mut acc = mix(0x22, v.len() as u64);
                for x in v {
                    acc = mix(acc, *x as u64);
                }
                acc
            }
            GroupElement::Heis { a, b, c } => mix(mix(mix(0x33, *a as u64), *b as u64), *c as u64),
            GroupElement::Lamp { lamps, cursor } => {
                let mut acc = mix(0x44, *cursor as u64);
                for l in lamps {
                    acc = mix(acc, *l as u64);
                }
                acc
            }
            GroupElement::Real(t) => mix(0x55, t.0.to_bits()),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(n) => write!(f, "{n}"),
            GroupElement::Vec(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            GroupElement::Heis { a, b, c } => write!(f, "({a},{b},{c})"),
            GroupElement::Lamp { lamps, cursor } => {
                write!(f, "({{")?;
                for (i, l) in lamps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, "}};{cursor})")
            }
            GroupElement::Real(t) => write!(f, "{}", t.0),
        }
    }
}

/// A group together with its symmetric generating set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub generators: Vec<GroupElement>,
    /// Quadrature step for flow windows; unused by discrete groups.
    pub flow_step: f64,
}

impl GroupSpec {
    pub fn integer_line() -> Self {
        GroupSpec {
            kind: GroupKind::IntegerLine,
            generators: vec![GroupElement::Int(1), GroupElement::Int(-1)],
            flow_step: 0.0,
        }
    }

    pub fn integer_lattice(d: u8) -> Self {
        assert!(d >= 1, "lattice dimension must be positive");
        let mut generators = Vec::new();
        for i in 0..d as usize {
            for sign in [1i64, -1] {
                let mut v = vec![0i64; d as usize];
                v[i] = sign;
                generators.push(GroupElement::Vec(v));
            }
        }
        GroupSpec {
            kind: GroupKind::IntegerLattice(d),
            generators,
            flow_step: 0.0,
        }
    }

    /// Generators `a±1, b±1`; the center is reached through commutators.
    pub fn heisenberg() -> Self {
        GroupSpec {
            kind: GroupKind::HeisenbergDiscrete,
            generators: vec![
                GroupElement::heis(1, 0, 0),
                GroupElement::heis(-1, 0, 0),
                GroupElement::heis(0, 1, 0),
                GroupElement::heis(0, -1, 0),
            ],
            flow_step: 0.0,
        }
    }

    /// Generators: move the cursor by `±1`, toggle the lamp under it.
    pub fn lamplighter() -> Self {
        GroupSpec {
            kind: GroupKind::Lamplighter,
            generators: vec![
                GroupElement::lamp(vec![], 1),
                GroupElement::lamp(vec![], -1),
                GroupElement::lamp(vec![0], 0),
            ],
            flow_step: 0.0,
        }
    }

    pub fn real_line_flow(step: f64) -> Self {
        assert!(step > 0.0, "flow quadrature step must be positive");
        GroupSpec {
            kind: GroupKind::RealLineFlow,
            generators: vec![],
            flow_step: step,
        }
    }

    /// Stable name used in reports and the registry.
    pub fn stable_name(&self) -> String {
        match self.kind {
            GroupKind::IntegerLine => "Z".to_string(),
            GroupKind::IntegerLattice(d) => format!("Z^{d}"),
            GroupKind::HeisenbergDiscrete => "heis3".to_string(),
            GroupKind::Lamplighter => "lamplighter".to_string(),
            GroupKind::RealLineFlow => "R-flow".to_string(),
        }
    }

    /// Parse a stable name back into a spec with default generators.
    pub fn from_stable_name(name: &str) -> Result<Self> {
        match name {
            "Z" => Ok(GroupSpec::integer_line()),
            "heis3" => Ok(GroupSpec::heisenberg()),
            "lamplighter" => Ok(GroupSpec::lamplighter()),
            "R-flow" => Ok(GroupSpec::real_line_flow(0.25)),
            _ => {
                if let Some(d) = name.strip_prefix("Z^") {
                    let d: u8 = d.parse().map_err(|_| Error::BadParameter {
                        name: "group".into(),
                        reason: format!("bad lattice dimension in `{name}`"),
                    })?;
                    Ok(GroupSpec::integer_lattice(d))
                } else {
                    Err(Error::BadParameter {
                        name: "group".into(),
                        reason: format!("unknown group `{name}`"),
                    })
                }
            }
        }
    }

    fn fits(&self, g: &GroupElement) -> bool {
        matches!(
            (&self.kind, g),
            (GroupKind::IntegerLine, GroupElement::Int(_))
                | (GroupKind::HeisenbergDiscrete, GroupElement::Heis { .. })
                | (GroupKind::Lamplighter, GroupElement::Lamp { .. })
                | (GroupKind::RealLineFlow, GroupElement::Real(_))
        ) || matches!((&self.kind, g), (GroupKind::IntegerLattice(d), GroupElement::Vec(v)) if v.len() == *d as usize)
    }

    pub(crate) fn mismatch(&self, g: &GroupElement) -> Error {
        Error::EncodingMismatch {
            group: self.stable_name(),
            element: g.to_string(),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self.kind {
            GroupKind::IntegerLine => GroupElement::Int(0),
            GroupKind::IntegerLattice(d) => GroupElement::Vec(vec![0; d as usize]),
            GroupKind::HeisenbergDiscrete => GroupElement::heis(0, 0, 0),
            GroupKind::Lamplighter => GroupElement::lamp(vec![], 0),
            GroupKind::RealLineFlow => GroupElement::real(0.0),
        }
    }

    /// Group law. Heisenberg composes as the underlying matrices
    /// (`c` picks up `a₁·b₂`); the lamplighter shifts the right factor's
    /// lamps by the left cursor and takes the symmetric difference.
    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        if !self.fits(g) {
            return Err(self.mismatch(g));
        }
        if !self.fits(h) {
            return Err(self.mismatch(h));
        }
        Ok(match (g, h) {
            (GroupElement::Int(a), GroupElement::Int(b)) => GroupElement::Int(a + b),
            (GroupElement::Vec(u), GroupElement::Vec(v)) => {
                GroupElement::Vec(u.iter().zip(v).map(|(a, b)| a + b).collect())
            }
            (
                GroupElement::Heis {
                    a: a1,
                    b: b1,
                    c: c1,
                },
                GroupElement::Heis {
                    a: a2,
                    b: b2,
                    c: c2,
                },
            ) => GroupElement::heis(a1 + a2, b1 + b2, c1 + c2 + a1 * b2),
            (
                GroupElement::Lamp {
                    lamps: l1,
                    cursor: c1,
                },
                GroupElement::Lamp {
                    lamps: l2,
                    cursor: c2,
                },
            ) => {
                let shifted: Vec<i64> = l2.iter().map(|l| l + c1).collect();
                GroupElement::lamp(symmetric_difference(l1, &shifted), c1 + c2)
            }
            (GroupElement::Real(s), GroupElement::Real(t)) => GroupElement::real(s.0 + t.0),
            _ => unreachable!("fits() checked both operands"),
        })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        if !self.fits(g) {
            return Err(self.mismatch(g));
        }
        Ok(match g {
            GroupElement::Int(a) => GroupElement::Int(-a),
            GroupElement::Vec(v) => GroupElement::Vec(v.iter().map(|x| -x).collect()),
            GroupElement::Heis { a, b, c } => GroupElement::heis(-a, -b, a * b - c),
            GroupElement::Lamp { lamps, cursor } => {
                GroupElement::lamp(lamps.iter().map(|l| l - cursor).collect(), -cursor)
            }
            GroupElement::Real(t) => GroupElement::real(-t.0),
        })
    }

    /// Right translate of a set: `E · h`.
    pub fn right_translate(
        &self,
        set: &[GroupElement],
        h: &GroupElement,
    ) -> Result<Vec<GroupElement>> {
        set.iter().map(|e| self.compose(e, h)).collect()
    }

    /// Closed ball of the word metric for the spec's generating set, as
    /// `(element, word length)` sorted by length then encoding. BFS, so it
    /// requires a finitely generated (discrete) group.
    pub fn word_ball(&self, radius: u32) -> Result<Vec<(GroupElement, u32)>> {
        if matches!(self.kind, GroupKind::RealLineFlow) {
            return Err(Error::Unsupported(
                "word balls are not defined for the real flow".into(),
            ));
        }
        let mut dist: HashMap<GroupElement, u32> = HashMap::new();
        let mut frontier = vec![self.identity()];
        dist.insert(self.identity(), 0);
        for r in 1..=radius {
            let mut next = Vec::new();
            for g in &frontier {
                for s in &self.generators {
                    let gs = self.compose(g, s)?;
                    if !dist.contains_key(&gs) {
                        dist.insert(gs.clone(), r);
                        next.push(gs);
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        let mut ball: Vec<(GroupElement, u32)> = dist.into_iter().collect();
        ball.sort_by(|(g, lg), (h, lh)| lg.cmp(lh).then_with(|| g.cmp(h)));
        Ok(ball)
    }

    /// Word length of `g`, if it lies in the ball of the given radius.
    pub fn word_length_within(&self, g: &GroupElement, radius: u32) -> Result<Option<u32>> {
        Ok(self
            .word_ball(radius)?
            .into_iter()
            .find(|(h, _)| h == g)
            .map(|(_, l)| l))
    }

    /// `g^m` by squaring; negative exponents go through the inverse.
    pub fn power(&self, g: &GroupElement, m: i64) -> Result<GroupElement> {
        if m < 0 {
            return self.power(&self.inverse(g)?, -m);
        }
        let mut acc = self.identity();
        let mut base = g.clone();
        let mut m = m as u64;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.compose(&acc, &base)?;
            }
            m >>= 1;
            if m > 0 {
                base = self.compose(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// A random element: a word of at most `max_len` generator letters, or
    /// a uniform time in `[-max_len, max_len] · step` for flows.
    pub fn random_element<R: Rng>(&self, rng: &mut R, max_len: u32) -> GroupElement {
        if matches!(self.kind, GroupKind::RealLineFlow) {
            let span = max_len as f64 * self.flow_step;
            return GroupElement::real(rng.random_range(-span..=span));
        }
        let mut g = self.identity();
        let len = rng.random_range(0..=max_len);
        for _ in 0..len {
            let s = &self.generators[rng.random_range(0..self.generators.len())];
            let next = if rng.random::<bool>() {
                self.compose(&g, s)
            } else {
                self.compose(&g, &self.inverse(s).expect("generator"))
            };
            g = next.expect("generator word");
        }
        g
    }
}

/// Symmetric difference of two sorted lamp sets.
fn symmetric_difference(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_composition() {
        let z = GroupSpec::integer_line();
        let g = z
            .compose(&GroupElement::Int(2), &GroupElement::Int(3))
            .unwrap();
        assert_eq!(g, GroupElement::Int(5));
        assert_eq!(
            z.inverse(&GroupElement::Int(5)).unwrap(),
            GroupElement::Int(-5)
        );
        assert_eq!(z.identity(), GroupElement::Int(0));
    }

    #[test]
    fn lattice_identity_and_mismatch() {
        let z2 = GroupSpec::integer_lattice(2);
        assert_eq!(z2.identity(), GroupElement::vec2(0, 0));
        let err = z2.compose(&GroupElement::Int(1), &GroupElement::vec2(0, 0));
        assert!(matches!(err, Err(Error::EncodingMismatch { .. })));
    }

    #[test]
    fn heisenberg_follows_matrix_law() {
        let h = GroupSpec::heisenberg();
        let x = h
            .compose(&GroupElement::heis(1, 0, 0), &GroupElement::heis(0, 1, 0))
            .unwrap();
        assert_eq!(x, GroupElement::heis(1, 1, 1));
        assert_eq!(
            h.inverse(&GroupElement::heis(1, 1, 1)).unwrap(),
            GroupElement::heis(-1, -1, 0)
        );
    }

    #[test]
    fn lamplighter_shifts_then_toggles() {
        let l = GroupSpec::lamplighter();
        let g = GroupElement::lamp(vec![], 1);
        let h = GroupElement::lamp(vec![0], 0);
        assert_eq!(l.compose(&g, &h).unwrap(), GroupElement::lamp(vec![1], 1));
        let gh = GroupElement::lamp(vec![-2, 3], 4);
        let inv = l.inverse(&gh).unwrap();
        assert_eq!(l.compose(&inv, &gh).unwrap(), l.identity());
        assert_eq!(l.compose(&gh, &inv).unwrap(), l.identity());
    }

    #[test]
    fn word_balls_are_sorted_and_sized() {
        let z = GroupSpec::integer_line();
        let ball = z.word_ball(3).unwrap();
        assert_eq!(ball.len(), 7);
        assert_eq!(ball[0], (GroupElement::Int(0), 0));
        let z2 = GroupSpec::integer_lattice(2);
        // l^1 ball of radius 2 in Z^2: 1 + 4 + 8 = 13 points.
        assert_eq!(z2.word_ball(2).unwrap().len(), 13);
    }

    #[test]
    fn flow_rejects_word_balls() {
        let f = GroupSpec::real_line_flow(0.25);
        assert!(f.word_ball(2).is_err());
    }
}
