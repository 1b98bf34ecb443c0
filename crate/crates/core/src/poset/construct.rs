use std::sync::Arc;

use super::FinitePoset;
use crate::error::{Error, Result};

/// A poset with a fresh global minimum and maximum adjoined.
///
/// Base elements keep their indices; `bottom == base.len()` and
/// `top == base.len() + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedPoset {
    pub poset: FinitePoset,
    pub bottom: usize,
    pub top: usize,
}

impl AugmentedPoset {
    pub fn base_len(&self) -> usize {
        self.bottom
    }

    pub fn into_arc(self) -> Arc<FinitePoset> {
        Arc::new(self.poset)
    }
}

fn fresh(base: &FinitePoset, stem: &str) -> String {
    let mut name = stem.to_string();
    while base.index_of(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Adjoins `-inf` below and `+inf` above everything. Applying it to an
/// already augmented poset adds another fresh pair.
pub fn augment(p: &FinitePoset) -> AugmentedPoset {
    let n = p.len();
    let mut names = p.names().to_vec();
    names.push(fresh(p, "-inf"));
    names.push(fresh(p, "+inf"));
    let poset = FinitePoset::from_relation_unchecked(names, |x, y| {
        x == n || y == n + 1 || (x < n && y < n && p.leq(x, y))
    })
    .expect("fresh names are unique");
    AugmentedPoset {
        poset,
        bottom: n,
        top: n + 1,
    }
}

pub fn opposite(p: &FinitePoset) -> FinitePoset {
    FinitePoset::from_relation_unchecked(p.names().to_vec(), |x, y| p.leq(y, x))
        .expect("names already unique")
}

/// Same elements, only the reflexive pairs.
pub fn discretize(p: &FinitePoset) -> FinitePoset {
    FinitePoset::from_relation_unchecked(p.names().to_vec(), |x, y| x == y)
        .expect("names already unique")
}

/// The sub-poset `[x, y] = {z : x ≤ z ≤ y}` in its induced order.
pub fn interval(p: &FinitePoset, x: usize, y: usize) -> Result<FinitePoset> {
    if !p.leq(x, y) {
        return Err(Error::NotComparable(p.name(x).into(), p.name(y).into()));
    }
    let members: Vec<usize> = p.elements().filter(|&z| p.leq(x, z) && p.leq(z, y)).collect();
    let names = members.iter().map(|&z| p.name(z).to_string()).collect();
    FinitePoset::from_relation_unchecked(names, |a, b| p.leq(members[a], members[b]))
}

/// Componentwise product. Element `(i, j)` has index `i * right.len() + j`.
#[derive(Debug, Clone)]
pub struct ProductPoset {
    pub poset: Arc<FinitePoset>,
    pub left: Arc<FinitePoset>,
    pub right: Arc<FinitePoset>,
}

impl ProductPoset {
    pub fn pair(&self, i: usize, j: usize) -> usize {
        i * self.right.len() + j
    }

    pub fn project(&self, factor: usize, idx: usize) -> usize {
        match factor {
            0 => idx / self.right.len(),
            1 => idx % self.right.len(),
            _ => panic!("a binary product has factors 0 and 1"),
        }
    }
}

pub fn product(left: Arc<FinitePoset>, right: Arc<FinitePoset>) -> ProductPoset {
    let m = right.len();
    let mut names = Vec::with_capacity(left.len() * m);
    for a in left.names() {
        for b in right.names() {
            names.push(format!("({a},{b})"));
        }
    }
    let poset = FinitePoset::from_relation_unchecked(names.clone(), |x, y| {
        left.leq(x / m, y / m) && right.leq(x % m, y % m)
    })
    .or_else(|_| {
        // Tuple names can collide when element names contain commas.
        let names = (0..names.len()).map(|i| format!("#{}", i)).collect();
        FinitePoset::from_relation_unchecked(names, |x, y| {
            left.leq(x / m, y / m) && right.leq(x % m, y % m)
        })
    })
    .expect("index names are unique");
    ProductPoset {
        poset: Arc::new(poset),
        left,
        right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::make_poset;

    fn chain(n: usize) -> FinitePoset {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> = (1..n)
            .map(|i| ((i - 1).to_string(), i.to_string()))
            .collect();
        make_poset(&names, &covers).unwrap()
    }

    #[test]
    fn augment_empty_is_two_chain() {
        let empty = make_poset::<&str>(&[], &[]).unwrap();
        let a = augment(&empty);
        assert_eq!(a.poset.len(), 2);
        assert!(a.poset.lt(a.bottom, a.top));
        assert_eq!(a.poset.name(a.bottom), "-inf");
    }

    #[test]
    fn augment_chain_and_antichain() {
        let a = augment(&chain(2));
        assert_eq!(a.poset.len(), 4);
        assert_eq!(a.poset.covers().len(), 3);
        let anti = make_poset(&["a", "b"], &[]).unwrap();
        let d = augment(&anti);
        assert!(!d.poset.comparable(0, 1));
        assert_eq!(d.poset.bottom(), Some(d.bottom));
        assert_eq!(d.poset.top(), Some(d.top));
        assert!(d.poset.is_complete_lattice());
    }

    #[test]
    fn augment_twice_adds_fresh_extremes() {
        let a = augment(&chain(1));
        let b = augment(&a.poset);
        assert_eq!(b.poset.len(), 5);
        assert_eq!(b.poset.name(b.bottom), "-inf'");
        assert_eq!(b.poset.name(b.top), "+inf'");
        assert!(b.poset.lt(b.bottom, a.bottom));
    }

    #[test]
    fn opposite_reverses_and_is_involutive() {
        let c = chain(3);
        let o = opposite(&c);
        assert!(o.leq(2, 0));
        assert!(!o.leq(0, 2));
        assert_eq!(opposite(&o), c);
    }

    #[test]
    fn product_of_two_chains_is_diamond() {
        let p = product(Arc::new(chain(2)), Arc::new(chain(2)));
        assert_eq!(p.poset.len(), 4);
        let (a, b) = (p.pair(0, 1), p.pair(1, 0));
        assert!(!p.poset.comparable(a, b));
        assert!(p.poset.is_complete_lattice());
        assert_eq!(p.project(0, p.pair(1, 0)), 1);
        assert_eq!(p.project(1, p.pair(1, 0)), 0);
    }

    #[test]
    fn interval_and_discretize() {
        let a = augment(&chain(2));
        let i = interval(&a.poset, 0, a.top).unwrap();
        assert_eq!(i.len(), 3);
        assert!(i.leq(0, 2));
        assert_eq!(interval(&a.poset, 1, 0).unwrap_err().code(), "NotComparable");
        let d = discretize(&a.poset);
        assert!(d.elements().all(|x| d.up_set(x).count() == 1));
    }
}
