//! Seeded randomness helpers shared by the Monte Carlo routines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator for trial `index` under `root`: seeded with
/// `root + index` (wrapping), so trials are independent of scheduling.
pub fn trial_rng(root: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(root.wrapping_add(index))
}

/// Inverse-CDF draw over `probs` in the given order. Mass lost to rounding
/// falls on the last index with positive weight.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random::<f64>() * probs.iter().sum::<f64>();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last = i;
        }
        acc += p;
        if u < acc {
            return i;
        }
    }
    last
}
