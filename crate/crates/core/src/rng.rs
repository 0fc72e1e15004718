//! Seeded random sources.
//!
//! Every randomized routine takes its random source explicitly. Parallel work
//! draws from sub-streams derived from `(master seed, step, index)`, so the
//! numbers a sample sees do not depend on how work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Counter-based generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-stream for sample `index` of step `step`.
///
/// The key comes from `master`; the ChaCha stream id is a mix of `step` and
/// `index`, so distinct pairs never share a keystream.
pub fn substream(master: u64, step: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(splitmix64(splitmix64(step) ^ index.rotate_left(32)));
    rng
}

/// One round of the SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
