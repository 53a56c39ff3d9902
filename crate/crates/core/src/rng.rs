//! Deterministic random streams.
//!
//! Every stochastic routine takes a root seed and derives one ChaCha stream
//! per work chunk, so results never depend on how many threads run them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Independent stream `stream` under root `seed`.
pub fn substream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `total` work items into chunks of at most `chunk` items.
pub(crate) fn chunk_sizes(total: usize, chunk: usize) -> impl Iterator<Item = (u64, usize)> {
    let n = total.div_ceil(chunk);
    (0..n).map(move |k| {
        let start = k * chunk;
        (k as u64, chunk.min(total - start))
    })
}
