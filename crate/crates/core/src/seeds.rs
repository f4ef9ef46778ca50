//! Deterministic seed derivation.
//!
//! Every randomized operation takes one user-facing `u64` seed; internal
//! stages (sampling, candidate shuffles, pair scans, per-window draws) derive
//! their own streams from it so that adding a stage never perturbs the
//! others. Derivation is SplitMix64 over the parent seed and a stage label,
//! which is stable across platforms and releases, unlike `DefaultHasher`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One SplitMix64 scramble round.
#[inline]
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix an additional word into a running seed.
#[inline]
pub fn mix(seed: u64, word: u64) -> u64 {
    splitmix64(seed ^ word.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Derive a child seed for a named stage.
pub fn derive(seed: u64, label: &str) -> u64 {
    let mut acc = splitmix64(seed);
    for chunk in label.as_bytes().chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        acc = mix(acc, u64::from_le_bytes(word));
    }
    acc
}

/// Derive a child seed for a named stage plus an index (window number,
/// trial number, ...).
pub fn derive_indexed(seed: u64, label: &str, index: u64) -> u64 {
    mix(derive(seed, label), index)
}

/// The RNG used throughout: small, fast, and stable across releases.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable_and_label_sensitive() {
        assert_eq!(derive(7, "sample"), derive(7, "sample"));
        assert_ne!(derive(7, "sample"), derive(7, "candidates"));
        assert_ne!(derive(7, "sample"), derive(8, "sample"));
        assert_ne!(
            derive_indexed(7, "window", 0),
            derive_indexed(7, "window", 1)
        );
    }

    #[test]
    fn rng_streams_reproduce() {
        use rand::Rng;
        let mut a = rng(derive(42, "x"));
        let mut b = rng(derive(42, "x"));
        for _ in 0..16 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }
}
