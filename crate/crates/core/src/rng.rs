//! Seeded random streams.
//!
//! Every generator draws from [`Stream`], a ChaCha8 stream from `rand_chacha`
//! 0.9. A run inside an experiment never shares a stream with another run: its
//! seed is derived from `(master seed, cell index, run index)` with
//! [`derive_seed`], a SplitMix64 finalizer chain. The mapping is part of the
//! reproducibility contract and must not change between releases.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The PRNG behind every generator.
pub type Stream = ChaCha8Rng;

pub const STREAM_NAME: &str = "chacha8/rand_chacha-0.9";

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run` in cell `cell` of an experiment with master seed `master`.
pub fn derive_seed(master: u64, cell: u64, run: u64) -> u64 {
    let h = splitmix64(master);
    let h = splitmix64(h ^ cell.wrapping_mul(0xD6E8_FEB8_6659_FD93));
    splitmix64(h ^ run.wrapping_mul(0xA076_1D64_78BD_642F))
}

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn run_stream(master: u64, cell: u64, run: u64) -> Stream {
    stream(derive_seed(master, cell, run))
}
