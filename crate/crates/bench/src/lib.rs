//! Seeded inputs shared by the benchmarks.

use std::sync::Arc;

use darboux_core::extension::random_partial_map;
use darboux_core::poset::generate::{all_lattices_up_to, random_poset};
use darboux_core::{FinitePoset, PartialMonotoneMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random poset on `n` elements.
pub fn poset(seed: u64, n: usize) -> Arc<FinitePoset> {
    Arc::new(random_poset(&mut rng(seed), n, 0.4))
}

/// A partial map from a random `n`-element poset into the largest lattice
/// on at most five elements, defined on about half the source.
pub fn partial_map(seed: u64, n: usize) -> PartialMonotoneMap {
    let mut rng = rng(seed);
    let target = Arc::new(all_lattices_up_to(5).pop().expect("lattices exist"));
    let source = Arc::new(random_poset(&mut rng, n, 0.4));
    random_partial_map(&mut rng, source, target, 0.5).expect("valid map")
}
