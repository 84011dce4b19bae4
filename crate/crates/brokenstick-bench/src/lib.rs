//! Shared fixtures for the benchmarks.

use brokenstick::{break_stick, StickSample};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible stick sample so benches measure the algorithm, not the
/// draw.
pub fn fixed_sample(n: usize, seed: u64) -> StickSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    break_stick(n, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_reproducible() {
        assert_eq!(fixed_sample(12, 42), fixed_sample(12, 42));
        assert_eq!(fixed_sample(12, 42).n(), 12);
    }
}
