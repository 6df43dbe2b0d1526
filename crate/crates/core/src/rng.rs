//! Seeded randomness.
//!
//! Every generator takes a `u64` seed and drives a ChaCha8 stream
//! (`ChaCha8Rng::seed_from_u64`). Monte Carlo experiments never share a
//! stream between samples: each sample gets a child seed obtained by
//! folding its coordinates (grid index, sample index, purpose tag) into the
//! parent seed with the SplitMix64 finaliser. Results therefore do not
//! depend on how samples are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a parent seed and a path of indices.
pub fn child_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(seed), |acc, &k| splitmix64(acc ^ splitmix64(k)))
}
