//! Seeded random streams. Instance `i` of a run with seed `s` always draws
//! from stream `i` of the ChaCha generator keyed by `s`, so results do not
//! depend on how instances are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type InstanceRng = ChaCha8Rng;

pub fn instance_rng(seed: u64, stream: u64) -> InstanceRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream reserved for shared data such as evaluation batteries.
pub const SHARED_STREAM: u64 = u64::MAX;
