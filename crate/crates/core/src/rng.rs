//! Seeded randomness. Every random choice in the toolkit draws from ChaCha20
//! so transcripts and experiments replay exactly from their seeds.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Identifier recorded in transcripts and reports.
pub const PRNG_ALGORITHM: &str = "chacha20";

pub type Rng = ChaCha20Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Independent stream for trial `trial` of an experiment seeded with `master`.
pub fn trial_rng(master: u64, trial: u64) -> Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng
}
