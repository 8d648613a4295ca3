//! Reproducible stream-splitting RNG.
//!
//! Every stochastic operation in the crate draws from a ChaCha12 stream
//! addressed by `(master_seed, stream_index)`. Streams are independent and
//! can be created in any order, so parallel ensembles are reproducible
//! regardless of scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The RNG used throughout the crate.
pub type StreamRng = ChaCha12Rng;

/// Deterministic stream for `(master_seed, stream)`.
pub fn stream_rng(master_seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(stream.into());
    rng
}

/// Derive a child seed from `(master_seed, index)`.
///
/// Used where a component needs its own 64-bit seed (for example one
/// environment per replica) rather than a full stream handle.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
