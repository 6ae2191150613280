#![allow(dead_code)]

pub mod gen;
pub mod logic_oracle;
pub mod sem_oracle;
pub mod suites;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
