//! Finite partially ordered sets.
//!
//! The order is stored closed: for every element we keep the bitsets of
//! elements above and below it, so every comparison is a single bit test.
//! Hasse covers are derived on demand. Element names are opaque strings and
//! are only sorted when serializing.

mod bitset;
mod construct;
mod function_space;
pub mod generate;
mod maps;

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use bitset::BitSet;
pub use construct::{augment, discretize, interval, opposite, product, AugmentedPoset, ProductPoset};
pub use function_space::{enumerate_monotone, FunctionSpace};
pub use maps::{
    are_isomorphic, enumerate_automorphisms, find_isomorphism, is_embedding, is_monotone,
    MonotoneMap, DEFAULT_AUTOMORPHISM_LIMIT,
};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct FinitePoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    lattice: OnceLock<bool>,
}

/// Wire form of a poset: element names plus Hasse covers `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<[String; 2]>,
}

/// Builds the poset whose order is the reflexive-transitive closure of
/// `covering_pairs`.
pub fn make_poset<S: AsRef<str>>(elements: &[S], covering_pairs: &[(S, S)]) -> Result<FinitePoset> {
    let names: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
    let index = index_names(&names)?;
    let n = names.len();
    let mut up: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
    for (a, b) in covering_pairs {
        let a = *index
            .get(a.as_ref())
            .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
        let b = *index
            .get(b.as_ref())
            .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
        up[a].insert(b);
    }
    // Warshall on rows: if i ≤ k then everything above k is above i.
    for k in 0..n {
        let row_k = up[k].clone();
        for row in up.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
    for i in 0..n {
        for j in up[i].iter() {
            if j != i && up[j].contains(i) {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                return Err(Error::Cycle(names[a].clone(), names[b].clone()));
            }
        }
    }
    Ok(FinitePoset::from_up_sets(names, index, up))
}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicateElement(name.clone()));
        }
    }
    Ok(index)
}

impl FinitePoset {
    fn from_up_sets(names: Vec<String>, index: HashMap<String, usize>, up: Vec<BitSet>) -> Self {
        let n = names.len();
        let mut down = vec![BitSet::new(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row.iter() {
                down[j].insert(i);
            }
        }
        FinitePoset {
            names,
            index,
            up,
            down,
            lattice: OnceLock::new(),
        }
    }

    /// Builds a poset from an already closed order predicate and checks the
    /// partial-order axioms.
    pub fn from_relation(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let p = Self::from_relation_unchecked(names, leq)?;
        p.check_axioms()?;
        Ok(p)
    }

    /// Same as [`from_relation`](Self::from_relation) without the O(n³)
    /// transitivity check, for constructions that are closed by definition.
    pub(crate) fn from_relation_unchecked(
        names: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let index = index_names(&names)?;
        let n = names.len();
        let up = (0..n)
            .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| leq(i, j))))
            .collect();
        Ok(Self::from_up_sets(names, index, up))
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(Error::Invalid(format!("relation is not reflexive at `{}`", self.names[i])));
            }
            for j in self.up[i].iter() {
                if j != i && self.leq(j, i) {
                    return Err(Error::Cycle(self.names[i].clone(), self.names[j].clone()));
                }
                if !self.up[j].is_subset(&self.up[i]) {
                    return Err(Error::Invalid(format!(
                        "relation is not transitive through `{}`",
                        self.names[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `{y : x ≤ y}`.
    pub fn up_set(&self, x: usize) -> &BitSet {
        &self.up[x]
    }

    /// `{y : y ≤ x}`.
    pub fn down_set(&self, x: usize) -> &BitSet {
        &self.down[x]
    }

    /// Hasse diagram: pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.up[x].iter() {
                if y == x {
                    continue;
                }
                let between = self.up[x]
                    .iter()
                    .any(|z| z != x && z != y && self.leq(z, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.down[x].count() == 1).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.up[x].count() == 1).collect()
    }

    /// Global minimum, if any.
    pub fn bottom(&self) -> Option<usize> {
        self.elements().find(|&x| self.up[x].count() == self.len())
    }

    /// Global maximum, if any.
    pub fn top(&self) -> Option<usize> {
        self.elements().find(|&x| self.down[x].count() == self.len())
    }

    pub fn upper_bounds(&self, subset: impl IntoIterator<Item = usize>) -> BitSet {
        let mut acc = BitSet::full(self.len());
        for s in subset {
            acc.intersect_with(&self.up[s]);
        }
        acc
    }

    pub fn lower_bounds(&self, subset: impl IntoIterator<Item = usize>) -> BitSet {
        let mut acc = BitSet::full(self.len());
        for s in subset {
            acc.intersect_with(&self.down[s]);
        }
        acc
    }

    /// Least element of a set of elements, if it has one.
    pub fn least_of(&self, set: &BitSet) -> Option<usize> {
        set.iter().find(|&u| set.is_subset(&self.up[u]))
    }

    pub fn greatest_of(&self, set: &BitSet) -> Option<usize> {
        set.iter().find(|&u| set.is_subset(&self.down[u]))
    }

    /// Least upper bound; `sup ∅` is the bottom element when it exists.
    pub fn sup(&self, subset: impl IntoIterator<Item = usize>) -> Option<usize> {
        self.least_of(&self.upper_bounds(subset))
    }

    /// Greatest lower bound; `inf ∅` is the top element when it exists.
    pub fn inf(&self, subset: impl IntoIterator<Item = usize>) -> Option<usize> {
        self.greatest_of(&self.lower_bounds(subset))
    }

    /// Every subset has a supremum and an infimum. For a finite poset this
    /// holds iff there is a bottom and every pair has a join.
    pub fn is_complete_lattice(&self) -> bool {
        *self.lattice.get_or_init(|| {
            if self.bottom().is_none() {
                return false;
            }
            for x in self.elements() {
                for y in (x + 1)..self.len() {
                    if self.sup([x, y]).is_none() {
                        return false;
                    }
                }
            }
            true
        })
    }

    /// An order of the elements in which every element comes after all
    /// elements below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&x| (self.down[x].count(), x));
        order
    }

    pub fn is_down_closed(&self, set: &BitSet) -> bool {
        set.iter().all(|x| self.down[x].is_subset(set))
    }

    pub fn is_up_closed(&self, set: &BitSet) -> bool {
        set.iter().all(|x| self.up[x].is_subset(set))
    }

    pub fn to_json(&self) -> PosetJson {
        let mut elements = self.names.clone();
        elements.sort();
        let mut covers: Vec<[String; 2]> = self
            .covers()
            .into_iter()
            .map(|(a, b)| [self.names[a].clone(), self.names[b].clone()])
            .collect();
        covers.sort();
        PosetJson { elements, covers }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = json
            .covers
            .iter()
            .map(|[a, b]| (a.as_str(), b.as_str()))
            .collect();
        let names: Vec<&str> = json.elements.iter().map(String::as_str).collect();
        make_poset(&names, &pairs)
    }

    /// Renders a subset as a sorted name list.
    pub fn subset_names(&self, set: impl IntoIterator<Item = usize>) -> Vec<String> {
        let mut v: Vec<String> = set.into_iter().map(|i| self.names[i].clone()).collect();
        v.sort();
        v
    }
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up
    }
}

impl Eq for FinitePoset {}

impl std::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let covers: Vec<(&str, &str)> = self
            .covers()
            .into_iter()
            .map(|(a, b)| (self.name(a), self.name(b)))
            .collect();
        f.debug_struct("FinitePoset")
            .field("elements", &self.names)
            .field("covers", &covers)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FinitePoset {
        make_poset(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn singleton() {
        let p = make_poset(&["a"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.leq(0, 0));
    }

    #[test]
    fn closure_forces_transitivity() {
        let p = chain3();
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn cycle_rejected() {
        let err = make_poset(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert_eq!(err.code(), "CycleError");
    }

    #[test]
    fn unknown_and_duplicate_rejected() {
        assert_eq!(
            make_poset(&["a"], &[("a", "z")]).unwrap_err(),
            Error::UnknownElement("z".into())
        );
        assert_eq!(
            make_poset(&["a", "a"], &[]).unwrap_err(),
            Error::DuplicateElement("a".into())
        );
    }

    #[test]
    fn closing_a_closed_relation_is_identity() {
        let p = make_poset(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).unwrap();
        let q = FinitePoset::from_relation(p.names().to_vec(), |x, y| p.leq(x, y)).unwrap();
        assert_eq!(p, q);
        let pairs: Vec<(String, String)> = p
            .elements()
            .flat_map(|x| p.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| p.leq(x, y))
            .map(|(x, y)| (p.name(x).to_string(), p.name(y).to_string()))
            .collect();
        let r = make_poset(p.names(), &pairs).unwrap();
        assert_eq!(p, r);
    }

    #[test]
    fn non_transitive_relation_rejected() {
        let err = FinitePoset::from_relation(vec!["a".into(), "b".into(), "c".into()], |x, y| {
            x == y || (x, y) == (0, 1) || (x, y) == (1, 2)
        })
        .unwrap_err();
        assert_eq!(err.code(), "Invalid");
    }

    #[test]
    fn sup_inf_and_lattice_check() {
        let p = chain3();
        assert_eq!(p.sup([0, 1]), Some(1));
        assert_eq!(p.sup([]), Some(0));
        assert_eq!(p.inf([]), Some(2));
        assert!(p.is_complete_lattice());
        let anti = make_poset(&["a", "b"], &[]).unwrap();
        assert_eq!(anti.sup([0, 1]), None);
        assert!(!anti.is_complete_lattice());
        let empty = make_poset::<&str>(&[], &[]).unwrap();
        assert!(!empty.is_complete_lattice());
    }

    #[test]
    fn json_is_sorted() {
        let p = make_poset(&["z", "a", "m"], &[("z", "a"), ("a", "m")]).unwrap();
        let j = p.to_json();
        assert_eq!(j.elements, vec!["a", "m", "z"]);
        assert_eq!(
            j.covers,
            vec![["a".to_string(), "m".to_string()], ["z".to_string(), "a".to_string()]]
        );
        let q = FinitePoset::from_json(&j).unwrap();
        assert_eq!(q.to_json(), j);
    }

    #[test]
    fn linear_extension_respects_order() {
        let p = make_poset(&["c", "b", "a"], &[("a", "b"), ("b", "c")]).unwrap();
        let order = p.linear_extension();
        let pos = |x: usize| order.iter().position(|&y| y == x).unwrap();
        for x in p.elements() {
            for y in p.elements() {
                if p.lt(x, y) {
                    assert!(pos(x) < pos(y));
                }
            }
        }
    }
}
