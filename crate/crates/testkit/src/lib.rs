//! Seeded generators and independent oracles shared by the test suites.

#![allow(clippy::needless_range_loop)]

pub mod brute;
pub mod random;

pub use rand_chacha::ChaCha8Rng;

use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
