//! Inputs shared by the benchmarks.

use ccei_core::scalar::ratio;
use ccei_core::{Dataset, Exact};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prices and quantities drawn uniformly from `[0.1, 10]` in steps of 0.01.
pub fn random_dataset(observations: usize, goods: usize, seed: u64) -> Dataset<Exact> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = || -> Vec<Vec<Exact>> {
        (0..observations)
            .map(|_| (0..goods).map(|_| ratio(rng.gen_range(10..=1000), 100)).collect())
            .collect()
    };
    let prices = matrix();
    let bundles = matrix();
    Dataset::new(prices, bundles).expect("entries are positive")
}
