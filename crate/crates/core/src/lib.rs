//! Numerical laboratory for the mean-metric complexity of measure-preserving
//! group actions.
//!
//! Given a metric space `(X, d)` of diameter one, an amenable group `G` acting
//! on `X` by measure-preserving maps, and a finitely supported (or quadrature)
//! probability measure `ρ` on `G`, the mean metric is
//!
//! ```text
//! d_ρ(x, y) = Σ_g ρ(g) · d(gx, gy),
//! ```
//!
//! and the measure complexity `S_ρ(X, μ, ε)` is the least number of open
//! `d_ρ`-balls of radius `ε` whose union has `μ`-mass above `1 − ε`. Systems
//! with discrete spectrum keep `S_ρ` bounded as `ρ` runs through normalized
//! Følner windows; weakly mixing ones do not. The crate estimates these
//! quantities from samples and cross-checks them against spectral diagnostics
//! (orbit nets of test functions, mean equicontinuity along tempered Følner
//! sequences, Birkhoff averages).
//!
//! Modules:
//! - [`groups`]: group elements, composition, word balls, Følner windows,
//!   Følner ratios and the Shulman (temperedness) constant;
//! - [`systems`]: the registry of built-in actions with their invariant
//!   measures, metrics and samplers;
//! - [`meanmetric`]: measures on the group, mean distances, and the packed
//!   pair-distance kernels the estimators run on;
//! - [`complexity`]: sample-based covering/packing estimates, Følner
//!   profiles, boundedness verdicts, worst-case searches over `ρ`;
//! - [`spectrum`]: `L²` orbit diagnostics, equicontinuity tests, product
//!   lifts, and ground-truth cross-validation;
//! - [`report`]: serializable report envelopes shared with the CLI.
//!
//! Everything randomized takes an explicit seed and is reproducible bit for
//! bit; parallel code paths (cargo feature `parallel`, on by default) produce
//! the same output as the sequential fallback.

pub mod complexity;
pub mod error;
pub mod exec;
pub mod groups;
pub mod meanmetric;
pub mod report;
pub mod seeds;
pub mod spectrum;
pub mod systems;

pub use error::{Error, Result};
