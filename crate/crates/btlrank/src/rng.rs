//! Seeded randomness. Every stochastic operation in this crate draws from a
//! ChaCha8 stream seeded through [`seeded_rng`], and derived streams (per
//! trial, per sweep point) come from [`mix_seed`], so identical inputs give
//! identical outputs across runs and platforms.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The PRNG used throughout: ChaCha8, keyed by a 64-bit seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive a child seed from a base seed and a stream index (trial number,
/// sweep position, ...). The mixing function is splitmix64 applied to
/// `seed XOR index`; it decorrelates consecutive indices.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
