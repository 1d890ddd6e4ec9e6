//! Seeded randomness. Every stochastic routine in the crate draws from
//! [`SimRng`] so results are reproducible across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Identity of the generator, recorded in every report.
pub const RNG_NAME: &str = "ChaCha8Rng/rand_chacha-0.3";

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for the `index`-th independent stream under `master`.
///
/// One SplitMix64 finalization of `master + (index + 1) * γ`; depends only on
/// the pair, never on the order streams are consumed in.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A seed from OS entropy, for runs where the caller did not supply one.
pub fn fresh_seed() -> u64 {
    rand::random()
}
