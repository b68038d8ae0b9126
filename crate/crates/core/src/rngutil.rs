//! Seeded generators. One master seed per run; every task derives its own
//! stream so that concurrent or reordered execution cannot change results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere sampling is required. ChaCha streams are
/// stable across platforms, which is what the byte-identical report
/// contract rests on.
pub type Rng = ChaCha8Rng;

/// Derive a task generator from a master seed and a task index.
pub fn task_rng(master: u64, task: u64) -> Rng {
    // splitmix64 step keeps nearby task indices uncorrelated
    let mut z = master ^ task.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Generator straight from a seed.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
