//! Counter-based random substreams.
//!
//! Every Monte Carlo chunk owns a generator derived from the run seed and a
//! path of tags (estimator, grid index, stratum, chunk index). Streams never
//! depend on which worker executes the chunk, so results are identical for
//! any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type handed to samplers.
pub type StreamRng = ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a tag path into a single 64-bit key.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix64(seed), |acc, &t| splitmix64(acc ^ splitmix64(t.wrapping_add(0xA5A5_5A5A))))
}

/// Independent generator for the given seed and tag path.
pub fn substream(seed: u64, tags: &[u64]) -> StreamRng {
    let k0 = derive_seed(seed, tags);
    let mut key = [0u8; 32];
    let mut z = k0;
    for chunk in key.chunks_mut(8) {
        z = splitmix64(z);
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
