//! Seed derivation for per-scene / per-config / per-stage RNG streams.
//!
//! Every random draw in the pipeline comes from a ChaCha8 stream seeded by
//! mixing the run seed with the ids of the unit of work, so units can be
//! generated in any order (or in parallel) and still produce identical bytes.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stage salts keep streams for different purposes disjoint even when the
/// (scene, config) ids coincide.
pub mod salt {
    pub const SCENE: u64 = 0x01;
    pub const CONFIG: u64 = 0x02;
    pub const VIEWS: u64 = 0x03;
    pub const SPLIT: u64 = 0x04;
    pub const WMSE: u64 = 0x05;
    pub const RANDOM_PRED: u64 = 0x06;
}

/// SplitMix64 finalizer.
fn mix(mut h: u64) -> u64 {
    h ^= h >> 30;
    h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

/// Mix a base seed with a stage salt and two counters.
pub fn derive(base: u64, salt: u64, a: u64, b: u64) -> u64 {
    let mut h = base ^ 0x9e37_79b9_7f4a_7c15;
    h = mix(h.wrapping_add(salt));
    h = mix(h ^ a.wrapping_mul(0xc2b2_ae3d_27d4_eb4f));
    mix(h ^ b.wrapping_mul(0x1656_67b1_9e37_79f9))
}

/// ChaCha8 stream for a derived seed. The generator is platform-independent
/// and fully specified, so datasets are byte-stable across machines.
pub fn rng(base: u64, salt: u64, a: u64, b: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(base, salt, a, b))
}
