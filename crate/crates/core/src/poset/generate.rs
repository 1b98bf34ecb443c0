//! Small-poset corpora: exhaustive enumeration up to isomorphism and random
//! sampling, used by tests, benchmarks and the acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{are_isomorphic, BitSet, FinitePoset};

/// `a`, `b`, ... `z`, then `x26`, `x27`, ...
pub fn element_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("x{i}")
    }
}

fn from_down_sets(downs: &[BitSet]) -> FinitePoset {
    let names = (0..downs.len()).map(element_name).collect();
    FinitePoset::from_relation_unchecked(names, |x, y| downs[y].contains(x)).expect("generated names are unique")
}

/// Random poset on `n` elements: each pair `i < j` of a hidden linear order
/// is related with probability `density`, then closed transitively. Element
/// names are shuffled so the hidden order is not the index order.
pub fn random_poset<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> FinitePoset {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut downs: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, [perm[i]])).collect();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(density) {
                let below = downs[i].clone();
                downs[j].union_with(&below);
            }
        }
    }
    // `downs` is indexed by hidden position; re-index by element.
    let mut by_element = vec![BitSet::new(n); n];
    for (pos, d) in downs.into_iter().enumerate() {
        by_element[perm[pos]] = d;
    }
    from_down_sets(&by_element)
}

/// Every poset on `n` elements up to isomorphism.
///
/// Builds naturally labelled posets by adding a new maximal element above
/// each down-set of the previous ones, then keeps one representative per
/// isomorphism class.
pub fn all_posets(n: usize) -> Vec<FinitePoset> {
    let mut labelled: Vec<Vec<BitSet>> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for downs in &labelled {
            for below in down_sets_of(downs, k) {
                let mut grown: Vec<BitSet> = downs
                    .iter()
                    .map(|d| BitSet::from_indices(k + 1, d.iter()))
                    .collect();
                let mut new = BitSet::from_indices(k + 1, below.iter());
                new.insert(k);
                grown.push(new);
                next.push(grown);
            }
        }
        labelled = next;
    }
    let mut classes: Vec<(Vec<(usize, usize)>, FinitePoset)> = Vec::new();
    for downs in labelled {
        let p = from_down_sets(&downs);
        let key = invariant(&p);
        let seen = classes
            .iter()
            .any(|(k, q)| *k == key && are_isomorphic(&p, q));
        if !seen {
            classes.push((key, p));
        }
    }
    classes.into_iter().map(|(_, p)| p).collect()
}

/// All down-closed subsets of the poset given by `downs` (size `k`).
fn down_sets_of(downs: &[BitSet], k: usize) -> Vec<BitSet> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << k) {
        let set = BitSet::from_indices(k, (0..k).filter(|&i| mask >> i & 1 == 1));
        if set.iter().all(|x| downs[x].is_subset(&set)) {
            out.push(set);
        }
    }
    out
}

fn invariant(p: &FinitePoset) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = p
        .elements()
        .map(|x| (p.down_set(x).count(), p.up_set(x).count()))
        .collect();
    v.sort();
    v
}

/// Every poset with at most `max` elements, up to isomorphism, smallest first.
pub fn all_posets_up_to(max: usize) -> Vec<FinitePoset> {
    (0..=max).flat_map(all_posets).collect()
}

/// Every finite (hence complete) lattice with `1..=max` elements up to
/// isomorphism.
pub fn all_lattices_up_to(max: usize) -> Vec<FinitePoset> {
    (1..=max)
        .flat_map(all_posets)
        .filter(FinitePoset::is_complete_lattice)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unlabelled_counts() {
        // Known numbers of unlabelled posets: 1, 1, 2, 5, 16, 63.
        let counts: Vec<usize> = (0..=5).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn lattice_counts() {
        // Known numbers of lattices on 1..=5 elements: 1, 1, 1, 2, 5.
        let counts: Vec<usize> = (1..=5)
            .map(|n| all_posets(n).into_iter().filter(|p| p.is_complete_lattice()).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5]);
    }

    #[test]
    fn random_posets_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(0..8);
            let p = random_poset(&mut rng, n, 0.4);
            let q = FinitePoset::from_relation(p.names().to_vec(), |x, y| p.leq(x, y));
            assert!(q.is_ok());
        }
    }
}
