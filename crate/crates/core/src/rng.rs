//! Deterministic random streams.
//!
//! Every random draw in the crate comes from a ChaCha stream keyed by a base
//! seed and a short path of indices (replicate, group, direction, ...), so
//! results never depend on scheduling order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags. Keep these distinct so that e.g. projection draws and
/// tie-breaking never share a stream.
pub mod tag {
    pub const DIRECTIONS: u64 = 0x5250_4449;
    pub const TIES: u64 = 0x5449_4553;
    pub const SAMPLE: u64 = 0x5341_4d50;
    pub const DEPTH: u64 = 0x4445_5054;
    pub const PERMUTE: u64 = 0x5045_524d;
    pub const POWER: u64 = 0x504f_5752;
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed with a path of indices into a new 64-bit seed.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix(seed), |acc, &p| splitmix(acc ^ splitmix(p)))
}

/// A ChaCha8 generator for the stream identified by `(seed, path)`.
pub fn stream(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, path))
}
