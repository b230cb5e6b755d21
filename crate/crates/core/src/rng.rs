//! Seeded randomness.
//!
//! All stochastic operations use [`ChaCha8Rng`] seeded through
//! `SeedableRng::seed_from_u64`. ChaCha8 output is specified independently of
//! platform and word size, so a seed reproduces the same stream everywhere.
//! Per-trial seeds are derived with the SplitMix64 finaliser so that trial `i`
//! of base seed `s` never depends on how many trials run or in which order.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finaliser applied to `base + index * golden`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeds for `trials` independent runs.
pub fn trial_seeds(base: u64, trials: usize) -> Vec<u64> {
    (0..trials as u64).map(|i| derive_seed(base, i)).collect()
}
