use std::collections::BTreeMap;
use std::sync::Arc;

use super::FinitePoset;
use crate::error::{Error, Result};

/// Default bound on `|P|` for exhaustive automorphism search.
pub const DEFAULT_AUTOMORPHISM_LIMIT: usize = 10;

/// `x ≤ y ⇒ f(x) ≤ f(y)` for a total assignment `f` given by index.
pub fn is_monotone(values: &[usize], source: &FinitePoset, target: &FinitePoset) -> bool {
    values.len() == source.len()
        && source.elements().all(|x| {
            source
                .up_set(x)
                .iter()
                .all(|y| target.leq(values[x], values[y]))
        })
}

/// Monotone and order-reflecting: `f(x) ≤ f(y) ⇒ x ≤ y`.
pub fn is_embedding(values: &[usize], source: &FinitePoset, target: &FinitePoset) -> bool {
    is_monotone(values, source, target)
        && source.elements().all(|x| {
            source
                .elements()
                .all(|y| !target.leq(values[x], values[y]) || source.leq(x, y))
        })
}

/// A total order-preserving map between two finite posets.
#[derive(Clone)]
pub struct MonotoneMap {
    source: Arc<FinitePoset>,
    target: Arc<FinitePoset>,
    values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Arc<FinitePoset>, target: Arc<FinitePoset>, values: Vec<usize>) -> Result<Self> {
        if values.len() != source.len() {
            return Err(Error::Invalid(format!(
                "assignment has {} values for {} elements",
                values.len(),
                source.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= target.len()) {
            return Err(Error::Invalid(format!("target index {bad} out of range")));
        }
        if let Some((x, y)) = first_violation(&values, &source, &target) {
            return Err(Error::NotMonotone(format!(
                "{} ≤ {} but images {} ≰ {}",
                source.name(x),
                source.name(y),
                target.name(values[x]),
                target.name(values[y])
            )));
        }
        Ok(MonotoneMap { source, target, values })
    }

    pub(crate) fn new_unchecked(source: Arc<FinitePoset>, target: Arc<FinitePoset>, values: Vec<usize>) -> Self {
        debug_assert!(is_monotone(&values, &source, &target));
        MonotoneMap { source, target, values }
    }

    pub fn identity(p: Arc<FinitePoset>) -> Self {
        let values = p.elements().collect();
        MonotoneMap {
            source: p.clone(),
            target: p,
            values,
        }
    }

    pub fn source(&self) -> &Arc<FinitePoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePoset> {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_embedding(&self) -> bool {
        is_embedding(&self.values, &self.source, &self.target)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len() && {
            let mut seen = vec![false; self.target.len()];
            self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        }
    }

    /// A bijective embedding, i.e. an order isomorphism.
    pub fn is_isomorphism(&self) -> bool {
        self.is_bijective() && self.is_embedding()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &MonotoneMap) -> Result<MonotoneMap> {
        if *self.target != *g.source {
            return Err(Error::Mismatch("composition through different posets".into()));
        }
        let values = self.values.iter().map(|&v| g.values[v]).collect();
        Ok(MonotoneMap::new_unchecked(self.source.clone(), g.target.clone(), values))
    }

    /// Inverse of an order isomorphism.
    pub fn inverse(&self) -> Option<MonotoneMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut inv = vec![0; self.values.len()];
        for (x, &v) in self.values.iter().enumerate() {
            inv[v] = x;
        }
        Some(MonotoneMap::new_unchecked(self.target.clone(), self.source.clone(), inv))
    }

    /// Pointwise order `f ≤ g`.
    pub fn leq_pointwise(&self, other: &MonotoneMap) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(&a, &b)| self.target.leq(a, b))
    }

    /// Name-keyed form, deterministic order.
    pub fn to_named(&self) -> BTreeMap<String, String> {
        self.values
            .iter()
            .enumerate()
            .map(|(x, &v)| (self.source.name(x).to_string(), self.target.name(v).to_string()))
            .collect()
    }
}

fn first_violation(values: &[usize], source: &FinitePoset, target: &FinitePoset) -> Option<(usize, usize)> {
    source.elements().find_map(|x| {
        source
            .up_set(x)
            .iter()
            .find(|&y| !target.leq(values[x], values[y]))
            .map(|y| (x, y))
    })
}

impl PartialEq for MonotoneMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && *self.source == *other.source && *self.target == *other.target
    }
}

impl Eq for MonotoneMap {}

impl std::fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(
                self.values
                    .iter()
                    .enumerate()
                    .map(|(x, &v)| (self.source.name(x), self.target.name(v))),
            )
            .finish()
    }
}

fn signature(s: &FinitePoset, x: usize) -> (usize, usize) {
    (s.down_set(x).count(), s.up_set(x).count())
}

/// Visits every order isomorphism `p → q` until `visit` returns false.
fn search_isomorphisms(p: &FinitePoset, q: &FinitePoset, visit: &mut dyn FnMut(&[usize]) -> bool) {
    if p.len() != q.len() {
        return;
    }
    let n = p.len();
    let order = p.linear_extension();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn step(
        depth: usize,
        order: &[usize],
        p: &FinitePoset,
        q: &FinitePoset,
        image: &mut [usize],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == order.len() {
            return visit(image);
        }
        let x = order[depth];
        let sig = signature(p, x);
        for y in q.elements() {
            if used[y] || signature(q, y) != sig {
                continue;
            }
            let consistent = order[..depth].iter().all(|&z| {
                p.leq(z, x) == q.leq(image[z], y) && p.leq(x, z) == q.leq(y, image[z])
            });
            if !consistent {
                continue;
            }
            image[x] = y;
            used[y] = true;
            let go_on = step(depth + 1, order, p, q, image, used, visit);
            used[y] = false;
            image[x] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }

    step(0, &order, p, q, &mut image, &mut used, visit);
}

/// Some order isomorphism `p → q`, by backtracking.
pub fn find_isomorphism(p: &FinitePoset, q: &FinitePoset) -> Option<Vec<usize>> {
    let mut found = None;
    search_isomorphisms(p, q, &mut |f| {
        found = Some(f.to_vec());
        false
    });
    found
}

pub fn are_isomorphic(p: &FinitePoset, q: &FinitePoset) -> bool {
    find_isomorphism(p, q).is_some()
}

/// All automorphisms of `p`, identity first, by exhaustive search.
pub fn enumerate_automorphisms(p: &Arc<FinitePoset>, limit: usize) -> Result<Vec<MonotoneMap>> {
    if p.len() > limit {
        return Err(Error::SizeLimitExceeded {
            what: "poset size for automorphism search",
            limit,
        });
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    search_isomorphisms(p, p, &mut |f| {
        out.push(f.to_vec());
        true
    });
    out.sort();
    let id: Vec<usize> = p.elements().collect();
    if let Some(pos) = out.iter().position(|f| *f == id) {
        let id = out.remove(pos);
        out.insert(0, id);
    }
    Ok(out
        .into_iter()
        .map(|v| MonotoneMap::new_unchecked(p.clone(), p.clone(), v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{augment, make_poset};

    fn arc(p: FinitePoset) -> Arc<FinitePoset> {
        Arc::new(p)
    }

    #[test]
    fn identity_is_monotone_embedding() {
        let p = arc(make_poset(&["a", "b", "c"], &[("a", "b")]).unwrap());
        let id = MonotoneMap::identity(p.clone());
        assert!(is_monotone(id.values(), &p, &p));
        assert!(id.is_embedding());
    }

    #[test]
    fn constant_on_antichain_is_not_embedding() {
        let anti = make_poset(&["a", "b"], &[]).unwrap();
        let one = make_poset(&["*"], &[]).unwrap();
        assert!(is_monotone(&[0, 0], &anti, &one));
        assert!(!is_embedding(&[0, 0], &anti, &one));
    }

    #[test]
    fn swap_on_chain_is_not_monotone() {
        let c = arc(make_poset(&["0", "1"], &[("0", "1")]).unwrap());
        assert!(!is_monotone(&[1, 0], &c, &c));
        assert_eq!(
            MonotoneMap::new(c.clone(), c, vec![1, 0]).unwrap_err().code(),
            "NotMonotone"
        );
    }

    #[test]
    fn chains_are_rigid() {
        for n in 1..6 {
            let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let covers: Vec<(String, String)> =
                (1..n).map(|i| ((i - 1).to_string(), i.to_string())).collect();
            let c = arc(make_poset(&names, &covers).unwrap());
            let auts = enumerate_automorphisms(&c, DEFAULT_AUTOMORPHISM_LIMIT).unwrap();
            assert_eq!(auts.len(), 1);
        }
    }

    #[test]
    fn antichain_and_diamond_have_two() {
        let anti = make_poset(&["a", "b"], &[]).unwrap();
        assert_eq!(enumerate_automorphisms(&arc(anti.clone()), 10).unwrap().len(), 2);
        let d = augment(&anti);
        let auts = enumerate_automorphisms(&arc(d.poset.clone()), 10).unwrap();
        assert_eq!(auts.len(), 2);
        for f in &auts {
            assert_eq!(f.apply(d.bottom), d.bottom);
            assert_eq!(f.apply(d.top), d.top);
        }
    }

    #[test]
    fn diamond_automorphisms_match_brute_force() {
        let d = arc(augment(&make_poset(&["a", "b"], &[]).unwrap()).poset);
        let mut brute = 0;
        let perms = permutations(4);
        for perm in &perms {
            if is_embedding(perm, &d, &d) {
                brute += 1;
            }
        }
        assert_eq!(perms.len(), 24);
        assert_eq!(brute, enumerate_automorphisms(&d, 10).unwrap().len());
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn size_guard() {
        let names: Vec<String> = (0..11).map(|i| i.to_string()).collect();
        let p = arc(make_poset::<String>(&names, &[]).unwrap());
        assert!(enumerate_automorphisms(&p, DEFAULT_AUTOMORPHISM_LIMIT)
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn inverse_and_composition() {
        let anti = arc(make_poset(&["a", "b", "c"], &[]).unwrap());
        let cyc = MonotoneMap::new(anti.clone(), anti.clone(), vec![1, 2, 0]).unwrap();
        let inv = cyc.inverse().unwrap();
        assert_eq!(cyc.then(&inv).unwrap(), MonotoneMap::identity(anti));
    }
}
