//! Order completions of finite posets.
//!
//! The free cocompletion is the lattice of down-sets ordered by inclusion,
//! with each element sent to its principal down-set. The Darboux set of the
//! identity on that image is computed with the extension engine; the
//! Dedekind–MacNeille cuts are computed independently by closing every
//! subset under lower-bounds-of-upper-bounds, so the two can be compared.

mod groups;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extension::{extension_pair, ExtensionPair, PartialMonotoneMap};
use crate::poset::{BitSet, FinitePoset, MonotoneMap};

pub use groups::{
    audit_composition_product, bdar_of_group, is_completely_integrally_closed, AutomorphismGroup, BdarResult,
};

/// Default bound on the number of candidate sets examined by the
/// completion routines.
pub const DEFAULT_SET_LIMIT: usize = 1 << 16;

/// A down-closed subset of a finite poset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DownSet {
    pub members: BitSet,
}

impl DownSet {
    pub fn new(carrier: &FinitePoset, members: BitSet) -> Result<Self> {
        if carrier.is_down_closed(&members) {
            Ok(DownSet { members })
        } else {
            Err(Error::Invalid(format!(
                "{{{}}} is not down-closed",
                carrier.subset_names(members.iter()).join(",")
            )))
        }
    }

    /// `{y : y ≤ x}`.
    pub fn principal(carrier: &FinitePoset, x: usize) -> Self {
        DownSet {
            members: carrier.down_set(x).clone(),
        }
    }
}

/// Every down-set of `o`, smallest first and then by sorted member names.
pub fn down_sets(o: &FinitePoset, limit: usize) -> Result<Vec<BitSet>> {
    let order = o.linear_extension();
    let mut current = BitSet::new(o.len());
    let mut out = Vec::new();

    fn step(
        depth: usize,
        order: &[usize],
        o: &FinitePoset,
        current: &mut BitSet,
        out: &mut Vec<BitSet>,
        limit: usize,
    ) -> Result<()> {
        let Some(&x) = order.get(depth) else {
            if out.len() == limit {
                return Err(Error::SizeLimitExceeded {
                    what: "number of down-sets",
                    limit,
                });
            }
            out.push(current.clone());
            return Ok(());
        };
        step(depth + 1, order, o, current, out, limit)?;
        // Everything below x comes earlier in the order, so it is decided.
        if o.down_set(x).iter().all(|y| y == x || current.contains(y)) {
            current.insert(x);
            step(depth + 1, order, o, current, out, limit)?;
            current.remove(x);
        }
        Ok(())
    }

    step(0, &order, o, &mut current, &mut out, limit)?;
    sort_sets(o, &mut out);
    Ok(out)
}

fn sort_sets(o: &FinitePoset, sets: &mut [BitSet]) {
    sets.sort_by_cached_key(|s| (s.count(), o.subset_names(s.iter())));
}

fn set_name(o: &FinitePoset, s: &BitSet) -> String {
    format!("{{{}}}", o.subset_names(s.iter()).join(","))
}

/// Subsets of `o` ordered by inclusion, named `{a,b,...}`.
fn inclusion_poset(o: &FinitePoset, sets: &[BitSet]) -> FinitePoset {
    let names: Vec<String> = sets.iter().map(|s| set_name(o, s)).collect();
    let leq = |i: usize, j: usize| sets[i].is_subset(&sets[j]);
    FinitePoset::from_relation_unchecked(names, leq)
        .or_else(|_| {
            // Set names collide only when element names contain braces or commas.
            let names = (0..sets.len()).map(|i| format!("#{i}")).collect();
            FinitePoset::from_relation_unchecked(names, leq)
        })
        .expect("index names are unique")
}

/// A family of subsets of a carrier, materialized as a poset under inclusion.
#[derive(Debug, Clone)]
pub struct SetLattice {
    pub carrier: Arc<FinitePoset>,
    pub poset: Arc<FinitePoset>,
    pub sets: Vec<BitSet>,
    index: HashMap<BitSet, usize>,
}

impl SetLattice {
    fn new(carrier: Arc<FinitePoset>, sets: Vec<BitSet>) -> Self {
        let poset = Arc::new(inclusion_poset(&carrier, &sets));
        let index = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        SetLattice {
            carrier,
            poset,
            sets,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn index_of(&self, set: &BitSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    /// Members of the set at index `i`, as sorted carrier names.
    pub fn member_names(&self, i: usize) -> Vec<String> {
        self.carrier.subset_names(self.sets[i].iter())
    }
}

/// The down-set lattice of `o`.
pub fn free_cocompletion(o: &Arc<FinitePoset>, limit: usize) -> Result<SetLattice> {
    Ok(SetLattice::new(o.clone(), down_sets(o, limit)?))
}

/// `x ↦ {y : y ≤ x}` into a set lattice that contains every principal
/// down-set.
pub fn yoneda(lattice: &SetLattice) -> MonotoneMap {
    let o = &lattice.carrier;
    let values = o
        .elements()
        .map(|x| {
            lattice
                .index_of(o.down_set(x))
                .expect("principal down-sets belong to the lattice")
        })
        .collect();
    MonotoneMap::new_unchecked(o.clone(), lattice.poset.clone(), values)
}

/// The Darboux set of the identity on the Yoneda image, its bookkeeping,
/// and the completion obtained by removing its extremes.
#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub cocompletion: SetLattice,
    /// `lex` and `uex` of the identity on the Yoneda image, over the whole
    /// cocompletion.
    pub extensions: ExtensionPair,
    pub dar: SetLattice,
    pub yoneda: MonotoneMap,
    /// Index in `dar` of its least element (the constant value of the lower
    /// extension of the empty partial map).
    pub lex_empty: usize,
    /// Index in `dar` of its greatest element.
    pub uex_empty: usize,
    pub dar_prime: Arc<FinitePoset>,
    /// Index in `dar` of each element of `dar_prime`.
    pub dar_prime_members: Vec<usize>,
    /// The element whose principal down-set is the removed minimum, if any.
    pub min_is_yoneda_image: Option<usize>,
    /// The element whose principal down-set is the removed maximum, if any.
    pub max_is_yoneda_image: Option<usize>,
}

pub fn darboux_completion(o: &Arc<FinitePoset>, limit: usize) -> Result<CompletionResult> {
    let cocompletion = free_cocompletion(o, limit)?;
    let y = yoneda(&cocompletion);
    let image = BitSet::from_indices(cocompletion.len(), y.values().iter().copied());
    let phi = PartialMonotoneMap::identity_on(cocompletion.poset.clone(), &image);
    let extensions = extension_pair(&phi)?;
    let members = extensions.darboux_set();
    let dar = SetLattice::new(
        o.clone(),
        members.iter().map(|i| cocompletion.sets[i].clone()).collect(),
    );
    let yoneda = yoneda(&dar);
    let empty = PartialMonotoneMap::empty(dar.poset.clone(), dar.poset.clone());
    let extremes = extension_pair(&empty)?;
    // The source is nonempty: it always contains the empty down-set.
    let lex_empty = extremes.lower.apply(0);
    let uex_empty = extremes.upper.apply(0);
    let dar_prime_members: Vec<usize> = dar
        .poset
        .elements()
        .filter(|&i| i != lex_empty && i != uex_empty)
        .collect();
    let names = dar_prime_members.iter().map(|&i| dar.poset.name(i).to_string()).collect();
    let dar_prime = Arc::new(
        FinitePoset::from_relation_unchecked(names, |a, b| {
            dar.poset.leq(dar_prime_members[a], dar_prime_members[b])
        })
        .expect("names inherited from a poset"),
    );
    let find = |target: usize| o.elements().find(|&x| yoneda.apply(x) == target);
    Ok(CompletionResult {
        min_is_yoneda_image: find(lex_empty),
        max_is_yoneda_image: find(uex_empty),
        cocompletion,
        extensions,
        dar,
        yoneda,
        lex_empty,
        uex_empty,
        dar_prime,
        dar_prime_members,
    })
}

/// Dedekind–MacNeille cuts: all sets `A^{ul}` for `A ⊆ o`, found by closing
/// every one of the `2^|o|` subsets. `limit` bounds the subset count.
pub fn macneille_cuts(o: &Arc<FinitePoset>, limit: usize) -> Result<SetLattice> {
    let n = o.len();
    if n >= usize::BITS as usize - 1 || (1usize << n) > limit {
        return Err(Error::SizeLimitExceeded {
            what: "number of subsets examined for cuts",
            limit,
        });
    }
    let mut seen = std::collections::HashSet::new();
    for mask in 0usize..(1usize << n) {
        let subset = (0..n).filter(|&i| mask >> i & 1 == 1);
        let upper = o.upper_bounds(subset);
        seen.insert(o.lower_bounds(upper.iter()));
    }
    let mut sets: Vec<BitSet> = seen.into_iter().collect();
    sort_sets(o, &mut sets);
    Ok(SetLattice::new(o.clone(), sets))
}

/// The automorphism of `Dar(O)` induced by an automorphism `g` of `O`: the
/// Darboux extension of `Y(x) ↦ Y(g(x))`.
pub fn lift_automorphism(completion: &CompletionResult, g: &MonotoneMap) -> Result<MonotoneMap> {
    let o = &completion.cocompletion.carrier;
    if **g.source() != **o || **g.target() != **o {
        return Err(Error::NotAutomorphism("map is not an endomap of the completed poset".into()));
    }
    if !g.is_isomorphism() {
        return Err(Error::NotAutomorphism("map is not an order isomorphism".into()));
    }
    let dar = completion.dar.poset.clone();
    let y = &completion.yoneda;
    let mut values = vec![None; dar.len()];
    for x in o.elements() {
        values[y.apply(x)] = Some(y.apply(g.apply(x)));
    }
    let psi = PartialMonotoneMap::new(dar.clone(), dar.clone(), values)?;
    let pair = extension_pair(&psi)?;
    if pair.lower != pair.upper {
        return Err(Error::NotAutomorphism("lift is not defined everywhere".into()));
    }
    Ok(pair.upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{are_isomorphic, enumerate_automorphisms, make_poset};

    fn arc(p: FinitePoset) -> Arc<FinitePoset> {
        Arc::new(p)
    }

    fn names_of(l: &SetLattice) -> Vec<Vec<String>> {
        (0..l.len()).map(|i| l.member_names(i)).collect()
    }

    #[test]
    fn cocompletion_examples() {
        let chain = arc(make_poset(&["a", "b"], &[("a", "b")]).unwrap());
        let c = free_cocompletion(&chain, 100).unwrap();
        assert_eq!(names_of(&c), vec![vec![], vec!["a".to_string()], vec!["a".into(), "b".into()]]);
        let anti = arc(make_poset(&["a", "b"], &[]).unwrap());
        let c = free_cocompletion(&anti, 100).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.poset.is_complete_lattice());
        let empty = arc(make_poset::<&str>(&[], &[]).unwrap());
        assert_eq!(free_cocompletion(&empty, 100).unwrap().len(), 1);
    }

    #[test]
    fn yoneda_is_principal_embedding() {
        let chain = arc(make_poset(&["a", "b"], &[("a", "b")]).unwrap());
        let c = free_cocompletion(&chain, 100).unwrap();
        let y = yoneda(&c);
        assert_eq!(c.member_names(y.apply(1)), vec!["a", "b"]);
        assert_eq!(c.member_names(y.apply(0)), vec!["a"]);
        assert!(y.is_embedding());
    }

    #[test]
    fn completion_of_antichain() {
        let anti = arc(make_poset(&["a", "b"], &[]).unwrap());
        let r = darboux_completion(&anti, 100).unwrap();
        assert_eq!(r.dar.len(), 4);
        assert_eq!(r.dar_prime.len(), 2);
        assert_eq!(r.dar.member_names(r.lex_empty), Vec::<String>::new());
        assert_eq!(r.dar.member_names(r.uex_empty), vec!["a", "b"]);
        assert_eq!(r.min_is_yoneda_image, None);
        assert_eq!(r.max_is_yoneda_image, None);
    }

    #[test]
    fn completion_of_chain_excludes_empty_set() {
        let chain = arc(make_poset(&["a", "b"], &[("a", "b")]).unwrap());
        let r = darboux_completion(&chain, 100).unwrap();
        assert_eq!(names_of(&r.dar), vec![vec!["a".to_string()], vec!["a".into(), "b".into()]]);
        assert_eq!(r.min_is_yoneda_image, Some(0));
        assert_eq!(r.max_is_yoneda_image, Some(1));
        assert!(r.dar_prime.is_empty());
    }

    #[test]
    fn completion_of_empty_poset() {
        let empty = arc(make_poset::<&str>(&[], &[]).unwrap());
        let r = darboux_completion(&empty, 100).unwrap();
        assert_eq!(r.dar.len(), 1);
        assert_eq!(r.lex_empty, r.uex_empty);
        assert!(r.dar_prime.is_empty());
    }

    #[test]
    fn lower_extension_on_cocompletion_is_identity() {
        let p = arc(make_poset(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap());
        let r = darboux_completion(&p, 100).unwrap();
        assert_eq!(r.extensions.lower, MonotoneMap::identity(r.cocompletion.poset.clone()));
    }

    #[test]
    fn cuts_agree_on_crown() {
        // The 3-crown: a,b,c below x,y,z with a pair missing per element.
        let p = arc(make_poset(
            &["a", "b", "c", "x", "y", "z"],
            &[("a", "x"), ("a", "y"), ("b", "y"), ("b", "z"), ("c", "z"), ("c", "x")],
        )
        .unwrap());
        let r = darboux_completion(&p, 1000).unwrap();
        let cuts = macneille_cuts(&p, 1000).unwrap();
        assert_eq!(r.dar.sets, cuts.sets);
        assert!(are_isomorphic(&r.dar.poset, &cuts.poset));
    }

    #[test]
    fn lifted_swap() {
        let anti = arc(make_poset(&["a", "b"], &[]).unwrap());
        let r = darboux_completion(&anti, 100).unwrap();
        let auts = enumerate_automorphisms(&anti, 10).unwrap();
        let lifts: Vec<MonotoneMap> = auts.iter().map(|g| lift_automorphism(&r, g).unwrap()).collect();
        assert_eq!(lifts[0], MonotoneMap::identity(r.dar.poset.clone()));
        let swap = &lifts[1];
        let a = r.yoneda.apply(0);
        let b = r.yoneda.apply(1);
        assert_eq!(swap.apply(a), b);
        assert_eq!(swap.apply(r.lex_empty), r.lex_empty);
        assert_eq!(swap.apply(r.uex_empty), r.uex_empty);
        assert_ne!(lifts[0], lifts[1]);
    }

    #[test]
    fn lift_rejects_non_automorphism() {
        let chain = arc(make_poset(&["a", "b"], &[("a", "b")]).unwrap());
        let r = darboux_completion(&chain, 100).unwrap();
        let constant = MonotoneMap::new(chain.clone(), chain, vec![0, 0]).unwrap();
        assert_eq!(lift_automorphism(&r, &constant).unwrap_err().code(), "NotAutomorphism");
    }

    #[test]
    fn limits_enforced() {
        let anti = arc(make_poset(&["a", "b", "c"], &[]).unwrap());
        assert!(free_cocompletion(&anti, 7).unwrap_err().is_budget());
        assert!(macneille_cuts(&anti, 7).unwrap_err().is_budget());
    }
}
