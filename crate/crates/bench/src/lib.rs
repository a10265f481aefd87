//! Seeded inputs shared by the criterion benches.

use linkmax::dcov::DataMatrix;
use linkmax::{GroundSet, PairwiseSumLinkage, SquareMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform `[0, 1)` off-diagonal weights.
pub fn random_linkage(n: usize, seed: u64) -> (PairwiseSumLinkage, GroundSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = SquareMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { rng.random() });
    (
        PairwiseSumLinkage::new(w).expect("weights are valid"),
        GroundSet::indexed(n).expect("n >= 2"),
    )
}

/// `features` uniform columns of `samples` rows.
pub fn random_data(samples: usize, features: usize, seed: u64) -> DataMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns = (0..features)
        .map(|_| (0..samples).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    DataMatrix::from_columns((0..features).map(|j| format!("f{j}")).collect(), columns).expect("valid data")
}
