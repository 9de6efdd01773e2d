//! Deterministic RNG derivation.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] derived from a
//! user seed, a stream name, and a counter. Streams are independent of thread
//! count and of each other, which is what makes training resumable and
//! sampling reproducible: the RNG for (seed, "train", step, sample) is a pure
//! function of those values.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a, used to hash stream names. Stable across platforms and releases
/// (unlike `DefaultHasher`).
pub fn hash_str(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// SplitMix64 finalizer; mixes counters into seeds.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A ChaCha8 stream for `(seed, name, k)`.
pub fn substream(seed: u64, name: &str, k: u64) -> ChaCha8Rng {
    let s = mix(seed ^ mix(hash_str(name)) ^ mix(k));
    ChaCha8Rng::seed_from_u64(s)
}

/// Two-counter variant for per-step per-sample streams.
pub fn substream2(seed: u64, name: &str, a: u64, b: u64) -> ChaCha8Rng {
    let s = mix(seed ^ mix(hash_str(name)) ^ mix(a) ^ mix(b.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
    ChaCha8Rng::seed_from_u64(s)
}
