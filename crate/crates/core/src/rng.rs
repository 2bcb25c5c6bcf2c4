//! Seeded random streams.
//!
//! Every random draw in the library goes through [`StreamRng`], which is
//! ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`). The algorithm is fixed
//! and platform independent, so a `(seed, stream)` pair always produces the
//! same sequence. Experiments give each trial its own stream, which keeps
//! results independent of the order in which parallel workers pick trials up.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// Generator for stream `stream` of the experiment seeded with `seed`.
///
/// Streams of the same seed never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a sub-stream index from a trial index and a purpose tag, so one
/// trial can own several independent streams (weights, inputs, queries...).
pub fn substream(trial: u64, tag: u32) -> u64 {
    (trial << 8) | u64::from(tag & 0xff)
}
