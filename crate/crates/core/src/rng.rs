//! Reproducible random streams.
//!
//! Each Monte Carlo replication gets its own ChaCha stream derived from the
//! pair `(master_seed, index)`, so results do not depend on how replications
//! are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Independent generator for replication `index` under `master_seed`.
pub fn stream_rng(master_seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}
