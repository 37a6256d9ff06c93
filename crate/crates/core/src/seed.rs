//! Seed derivation.
//!
//! Every randomised component draws from its own ChaCha stream whose seed is
//! derived from a master seed and a stream index via SplitMix64. Episode i's
//! randomness therefore depends only on (master seed, i), so batches can be
//! executed in any order (or in parallel) without changing a single episode.

/// SplitMix64 finalizer step.
pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the child seed for stream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03).wrapping_add(0x9E37_79B9_7F4A_7C15))
}

/// Stream indices used by the episode runner.
pub const STREAM_SIM: u64 = 0;
pub const STREAM_RED: u64 = 1;
pub const STREAM_ADDR: u64 = 2;
pub const STREAM_SAMPLING: u64 = 3;
