//! Seed derivation for independent, order-free random substreams.
//!
//! Every random draw in the crate comes from a `ChaCha8Rng` whose seed is
//! derived from a base seed plus a path of integer keys (replication index,
//! UAV index, BS index, ...). Parallel and serial execution therefore draw
//! identical numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags, so that e.g. the HF channel and the random allocator never
/// share a substream for the same replication.
pub mod tag {
    pub const REPLICATION: u64 = 0x5245_504c;
    pub const CHANNEL_HF: u64 = 0x4846;
    pub const CHANNEL_LF: u64 = 0x4c46;
    pub const CHANNEL_MODEL: u64 = 0x4d4f_4445;
    pub const STAGE1: u64 = 0x5354_4731;
    pub const RANDOM_ALLOC: u64 = 0x0052_4e44;
    pub const LINK: u64 = 0x4c49_4e4b;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `keys` into `base`. Distinct key paths give unrelated seeds.
pub fn derive(base: u64, keys: &[u64]) -> u64 {
    keys.iter()
        .fold(splitmix64(base), |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

pub fn rng(base: u64, keys: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(base, keys))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_order_matters() {
        assert_ne!(derive(1, &[2, 3]), derive(1, &[3, 2]));
        assert_ne!(derive(1, &[2]), derive(1, &[2, 0]));
        assert_eq!(derive(7, &[1, 2, 3]), derive(7, &[1, 2, 3]));
    }
}
