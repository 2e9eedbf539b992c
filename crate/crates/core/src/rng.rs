//! Seeded randomness for the labs.
//!
//! Every trial or sample chunk draws from its own ChaCha stream selected by
//! its index, so results do not depend on how work is split across threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ci::{BitState, Strategy};

/// Generator for stream `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, n_cells: usize) -> BitState {
    BitState::from_bits((0..n_cells).map(|_| rng.gen::<bool>()).collect::<Vec<_>>()).expect("n_cells >= 1")
}

pub fn random_terms<R: Rng + ?Sized>(rng: &mut R, n_cells: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(1..=n_cells)).collect()
}

pub fn random_strategy<R: Rng + ?Sized>(rng: &mut R, n_cells: usize, len: usize) -> Strategy {
    Strategy::new(random_terms(rng, n_cells, len), n_cells).expect("terms drawn in range")
}
