//! Seeded, reproducible randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for instance `index` of a campaign with master seed `seed`.
///
/// Streams are independent, so instances can run in any order or on any
/// worker and still see the same numbers.
pub fn instance_rng(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
