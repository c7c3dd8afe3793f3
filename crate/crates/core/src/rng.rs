//! Seed handling.
//!
//! Every stochastic component takes a plain `u64` seed and builds a
//! [`ChaCha8Rng`] from it, so results do not depend on the platform or on the
//! thread schedule. Derived seeds come from the splitmix64 finalizer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The splitmix64 output function: a bijective avalanche mix of a 64-bit word.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a stream index.
///
/// The two inputs pass through separate mixing rounds, so `(s, i)` and
/// `(i, s)` give unrelated children.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
