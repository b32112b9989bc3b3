//! Counter-based seed derivation.
//!
//! Every random stream in the crate is a pure function of a master seed and an integer key, so
//! results never depend on how work is split across threads.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::graph::NodeId;

pub type Rng = Xoshiro256PlusPlus;

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sub-stream `key` of `master`.
#[inline]
pub fn derive_seed(master: u64, key: u64) -> u64 {
    splitmix64(master ^ splitmix64(key.wrapping_add(0x6A09_E667_F3BC_C908)))
}

#[inline]
pub fn stream(master: u64, key: u64) -> Rng {
    Rng::seed_from_u64(derive_seed(master, key))
}

/// Uniform draw in `[0, 1)` keyed by `(seed, key)`.
#[inline]
pub fn unit(seed: u64, key: u64) -> f64 {
    (derive_seed(seed, key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Order-independent hash of a node set.
pub fn set_hash(nodes: &[NodeId]) -> u64 {
    let mut ids: Vec<u32> = nodes.iter().map(|v| v.0).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.iter().fold(0xCBF2_9CE4_8422_2325 ^ ids.len() as u64, |h, &id| splitmix64(h ^ u64::from(id)))
}

/// Stable 64-bit key for a string label (FNV-1a).
pub fn str_key(s: &str) -> u64 {
    s.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01B3))
}
