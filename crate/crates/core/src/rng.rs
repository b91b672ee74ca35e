//! Random number streams.
//!
//! Every chain draws from a ChaCha8 generator (`rand_chacha::ChaCha8Rng`).
//! ChaCha output is specified bit-for-bit, so a `(seed, stream)` pair
//! reproduces the same sequence on any platform. Independent trials share a
//! seed and differ in the 64-bit stream id.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ChainRng = ChaCha8Rng;

pub const ALGORITHM: &str = "ChaCha8 (rand_chacha), 64-bit seed expanded by PCG32, 64-bit stream id";

pub fn stream_rng(seed: u64, stream: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer, used to derive child seeds from a master seed.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
