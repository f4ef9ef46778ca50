//! Følner windows, boundary ratios, and the Shulman (temperedness) constant.
//!
//! Window families per group, by name:
//! - `Z`: `intervals` `[0, n)` and `centered` `[-n, n]`;
//! - `Z^d`: `boxes` `[0, n)^d`, plus `rects` `[0, n) × [0, 2n)` for `d = 2`;
//! - `heis3`: `heis-boxes` `{0 ≤ a, b < n, 0 ≤ c < n²}` (size `n⁴`);
//! - `lamplighter`: `lamp-std` (cursor in `[0, n)`, lamps inside `[0, n)`,
//!   size `n · 2ⁿ`);
//! - `R-flow`: `intervals` `[0, n]` with trapezoid quadrature.
//!
//! Discrete windows enumerate in shell order (the smallest `m` with
//! membership in window `m`, ties by encoding), which makes window `n` a
//! prefix of window `m ≥ n`. Greedy nets scanned in this order are then
//! monotone under window inclusion.

use super::{GroupElement, GroupKind, GroupSpec};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// A Følner window `F_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FolnerWindow {
    pub family: String,
    pub index: u32,
    pub content: WindowContent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum WindowContent {
    /// Elements in shell order; counting measure normalizes over them.
    Discrete(Vec<GroupElement>),
    /// `[0, t_end]` with suggested quadrature step for Lebesgue integrals.
    Interval { t_end: f64, step: f64 },
}

impl FolnerWindow {
    /// Number of elements (discrete) or quadrature nodes (flow).
    pub fn size(&self) -> usize {
        match &self.content {
            WindowContent::Discrete(v) => v.len(),
            WindowContent::Interval { t_end, step } => (t_end / step).round() as usize + 1,
        }
    }
}

impl GroupSpec {
    /// Family names available for this group; the first is the default.
    pub fn families(&self) -> &'static [&'static str] {
        match self.kind {
            GroupKind::IntegerLine => &["intervals", "centered"],
            GroupKind::IntegerLattice(2) => &["boxes", "rects"],
            GroupKind::IntegerLattice(_) => &["boxes"],
            GroupKind::HeisenbergDiscrete => &["heis-boxes"],
            GroupKind::Lamplighter => &["lamp-std"],
            GroupKind::RealLineFlow => &["intervals"],
        }
    }

    pub fn default_family(&self) -> &'static str {
        self.families()[0]
    }

    fn unknown_family(&self, family: &str) -> Error {
        Error::UnknownFamily {
            family: family.into(),
            group: self.stable_name(),
            available: self.families().join(", "),
        }
    }

    /// Largest admissible window index per family, keeping enumerated
    /// windows below ~10^6 elements.
    pub fn window_limit(&self, family: &str) -> u32 {
        match (&self.kind, family) {
            (GroupKind::IntegerLine, _) => 500_000,
            (GroupKind::IntegerLattice(d), "boxes") => {
                (1_000_000f64.powf(1.0 / f64::from(*d))).floor() as u32
            }
            (GroupKind::IntegerLattice(_), "rects") => 700,
            (GroupKind::HeisenbergDiscrete, _) => 31,
            (GroupKind::Lamplighter, _) => 16,
            (GroupKind::RealLineFlow, _) => u32::MAX,
            _ => 0,
        }
    }

    /// The `n`-th window of the named family.
    pub fn folner_window(&self, family: &str, n: u32) -> Result<FolnerWindow> {
        if !self.families().contains(&family) {
            return Err(self.unknown_family(family));
        }
        if n == 0 {
            return Err(Error::BadParameter {
                name: "n".into(),
                reason: "window indices start at 1".into(),
            });
        }
        let limit = self.window_limit(family);
        if n > limit {
            return Err(Error::WindowOutOfRange {
                family: family.into(),
                index: n,
                limit,
            });
        }
        let content = match (&self.kind, family) {
            (GroupKind::RealLineFlow, _) => WindowContent::Interval {
                t_end: f64::from(n),
                step: self.flow_step,
            },
            _ => WindowContent::Discrete(self.enumerate_window(family, n)),
        };
        Ok(FolnerWindow {
            family: family.to_string(),
            index: n,
            content,
        })
    }

    /// Shell-ordered enumeration; see the module docs for the invariant.
    fn enumerate_window(&self, family: &str, n: u32) -> Vec<GroupElement> {
        let n = n as i64;
        let mut out = Vec::new();
        match (&self.kind, family) {
            (GroupKind::IntegerLine, "intervals") => {
                out.extend((0..n).map(GroupElement::Int));
            }
            (GroupKind::IntegerLine, "centered") => {
                out.push(GroupElement::Int(0));
                for s in 1..=n {
                    out.push(GroupElement::Int(-s));
                    out.push(GroupElement::Int(s));
                }
            }
            (GroupKind::IntegerLattice(d), "boxes") => {
                let d = *d as usize;
                for s in 0..n {
                    push_box_shell(&mut out, d, s);
                }
            }
            (GroupKind::IntegerLattice(2), "rects") => {
                // [0, n) x [0, 2n); shell(a, b) = max(a, floor(b / 2)).
                for s in 0..n {
                    for a in 0..=s {
                        for b in 0..(2 * s + 2) {
                            if a.max(b / 2) == s {
                                out.push(GroupElement::vec2(a, b));
                            }
                        }
                    }
                }
            }
            (GroupKind::HeisenbergDiscrete, _) => {
                for s in 0..n {
                    for a in 0..=s {
                        for b in 0..=s {
                            for c in 0..(s + 1) * (s + 1) {
                                if a.max(b).max(isqrt(c)) == s {
                                    out.push(GroupElement::heis(a, b, c));
                                }
                            }
                        }
                    }
                }
            }
            (GroupKind::Lamplighter, _) => {
                // shell = max(cursor, highest lamp); masks over [0, s].
                for s in 0..n {
                    for cursor in 0..=s {
                        for mask in 0u64..(1 << (s + 1)) {
                            let top = 63 - mask.leading_zeros() as i64;
                            let shell = if mask == 0 { cursor } else { cursor.max(top) };
                            if shell == s {
                                let lamps: Vec<i64> =
                                    (0..=s).filter(|i| mask >> i & 1 == 1).collect();
                                out.push(GroupElement::lamp(lamps, cursor));
                            }
                        }
                    }
                }
            }
            _ => unreachable!("family membership checked by caller"),
        }
        out
    }

    /// Boundary ratio `|gF Δ F| / |F|`. Exact: set arithmetic for discrete
    /// windows, interval overlap for the flow.
    pub fn folner_ratio(&self, window: &FolnerWindow, g: &GroupElement) -> Result<f64> {
        match &window.content {
            WindowContent::Discrete(elems) => {
                let set: HashSet<&GroupElement> = elems.iter().collect();
                let mut stay = 0usize;
                for f in elems {
                    let gf = self.compose(g, f)?;
                    if set.contains(&gf) {
                        stay += 1;
                    }
                }
                Ok(2.0 * (elems.len() - stay) as f64 / elems.len() as f64)
            }
            WindowContent::Interval { t_end, .. } => match g {
                GroupElement::Real(t) => Ok(2.0 * t.0.abs().min(*t_end) / t_end),
                _ => Err(self.mismatch(g)),
            },
        }
    }

    /// Prefix Shulman constant `max_{2 ≤ n ≤ N} |∪_{k<n} F_k⁻¹ F_n| / |F_n|`,
    /// by exact enumeration for discrete groups. A sequence is tempered when
    /// these stay bounded; intervals on `Z` approach 2 and boxes on `Z^2`
    /// stay below 4. The flow is handled analytically (`F_k⁻¹F_n` is the
    /// interval `[-T_k, T_n]`), reported with `analytic = true`.
    pub fn shulman_report(&self, family: &str, n_max: u32) -> Result<ShulmanReport> {
        if !self.families().contains(&family) {
            return Err(self.unknown_family(family));
        }
        if n_max < 2 {
            return Err(Error::BadParameter {
                name: "n_max".into(),
                reason: "need at least two windows".into(),
            });
        }
        if matches!(self.kind, GroupKind::RealLineFlow) {
            let rows: Vec<ShulmanRow> = (2..=n_max)
                .map(|n| ShulmanRow {
                    n,
                    ratio: (2.0 * f64::from(n) - 1.0) / f64::from(n),
                })
                .collect();
            return Ok(ShulmanReport {
                group: self.stable_name(),
                family: family.into(),
                n_max,
                constant: 2.0,
                analytic: true,
                rows,
            });
        }

        let windows: Vec<Vec<GroupElement>> = (1..=n_max)
            .map(|n| {
                self.folner_window(family, n).map(|w| match w.content {
                    WindowContent::Discrete(v) => v,
                    WindowContent::Interval { .. } => unreachable!(),
                })
            })
            .collect::<Result<_>>()?;
        let ops: usize = (2..=n_max as usize)
            .map(|n| windows[n - 1].len() * windows[..n - 1].iter().map(Vec::len).sum::<usize>())
            .sum();
        if ops > 200_000_000 {
            return Err(Error::Unsupported(format!(
                "shulman enumeration for {family} up to n = {n_max} needs {ops} products; lower n_max"
            )));
        }

        let mut rows = Vec::new();
        let mut constant = 0.0f64;
        for n in 2..=n_max as usize {
            let fn_els = &windows[n - 1];
            let mut union: HashSet<GroupElement> = HashSet::new();
            for fk in &windows[..n - 1] {
                for f in fk {
                    let f_inv = self.inverse(f)?;
                    for g in fn_els {
                        union.insert(self.compose(&f_inv, g)?);
                    }
                }
            }
            let ratio = union.len() as f64 / fn_els.len() as f64;
            constant = constant.max(ratio);
            rows.push(ShulmanRow { n: n as u32, ratio });
        }
        Ok(ShulmanReport {
            group: self.stable_name(),
            family: family.into(),
            n_max,
            constant,
            analytic: false,
            rows,
        })
    }
}

/// Per-`n` ratio `|∪_{k<n} F_k⁻¹ F_n| / |F_n|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShulmanRow {
    pub n: u32,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShulmanReport {
    pub group: String,
    pub family: String,
    pub n_max: u32,
    pub constant: f64,
    /// True when the constant comes from interval arithmetic (flow) rather
    /// than set enumeration.
    pub analytic: bool,
    pub rows: Vec<ShulmanRow>,
}

/// Append the shell `max(coords) == s` of `[0, s]^d` in lexicographic order.
fn push_box_shell(out: &mut Vec<GroupElement>, d: usize, s: i64) {
    let mut v = vec![0i64; d];
    loop {
        if v.iter().copied().max() == Some(s) {
            out.push(GroupElement::Vec(v.clone()));
        }
        // Odometer over [0, s]^d, most significant digit first.
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if v[i] < s {
                v[i] += 1;
                for x in &mut v[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

fn isqrt(c: i64) -> i64 {
    let mut r = (c as f64).sqrt() as i64;
    while (r + 1) * (r + 1) <= c {
        r += 1;
    }
    while r * r > c {
        r -= 1;
    }
    r
}
