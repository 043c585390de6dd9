//! Deterministic seed derivation.
//!
//! Every stochastic phase of a run draws from its own ChaCha stream whose
//! seed is derived from a parent seed and a text tag. Streams are therefore
//! independent of the order in which phases execute, which keeps pipelines
//! that reorder their phases bit-for-bit comparable.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derives a child seed from `seed` and `tag` (FNV-1a over both).
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut state = OFFSET;
    for byte in seed.to_le_bytes() {
        state = (state ^ u64::from(byte)).wrapping_mul(PRIME);
    }
    for byte in tag.as_bytes() {
        state = (state ^ u64::from(*byte)).wrapping_mul(PRIME);
    }
    state
}

/// A ChaCha stream for the given parent seed and phase tag.
pub fn stream(seed: u64, tag: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, tag))
}
