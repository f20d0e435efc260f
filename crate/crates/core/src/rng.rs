// SPDX-License-Identifier: Apache-2.0

//! Seeded randomness.
//!
//! Every stochastic routine draws from ChaCha8 seeded by a `u64`. Child
//! streams are split off a master seed by selecting the ChaCha stream, so
//! instance `i` of an experiment gets the same randomness regardless of how
//! many other instances run or in which order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic child seed for stream `stream` of `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.next_u64()
}

/// Derives a child seed from a master seed and a list of labels.
pub fn derive_seed_path(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(master, |seed, &label| derive_seed(seed, label))
}
