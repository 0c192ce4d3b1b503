//! Seed derivation. Every random choice in a run is a pure function of the run seed
//! and a tag path, so runs replay exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tags separating independent random streams within one run.
pub mod tag {
    pub const VOTE: u64 = 1;
    pub const BLOCK_HASH: u64 = 2;
    pub const TABLE_HASH: u64 = 3;
    pub const BUMP: u64 = 4;
    pub const ROUND_HASH: u64 = 5;
    pub const COMPACTION: u64 = 6;
    pub const RESIDUAL: u64 = 7;
    pub const GENERATOR: u64 = 8;
    pub const PREPARE: u64 = 9;
}

/// SplitMix64-style avalanche over a word sequence.
pub fn mix(words: &[u64]) -> u64 {
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15;
    for &w in words {
        h ^= w
            .wrapping_add(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(h << 6)
            .wrapping_add(h >> 2);
        h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h ^= h >> 31;
    }
    h
}

/// A uniform draw in [0, 1) determined by the tag path.
pub fn unit(words: &[u64]) -> f64 {
    (mix(words) >> 11) as f64 / (1u64 << 53) as f64
}

/// `true` with probability `p`.
pub fn coin(p: f64, words: &[u64]) -> bool {
    unit(words) < p
}

/// A ChaCha stream keyed by the tag path.
pub fn stream(words: &[u64]) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    for (i, chunk) in key.chunks_mut(8).enumerate() {
        let word = mix(&[mix(words), i as u64]);
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
