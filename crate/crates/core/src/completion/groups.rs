//! Finite groups of automorphisms inside the endomap monoid `OP(L)` of a
//! finite lattice, the integral-closure condition, and the bounded Darboux
//! set of the identity on such a group.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extension::{bounded_darboux_set, extension_pair, PartialMonotoneMap};
use crate::poset::{enumerate_automorphisms, product, BitSet, FinitePoset, FunctionSpace, MonotoneMap};
use crate::report::AuditReport;

/// A set of automorphisms of `carrier` closed under composition (hence, being
/// finite, a group). The identity comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismGroup {
    carrier: Arc<FinitePoset>,
    maps: Vec<Vec<usize>>,
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&v| f[v]).collect()
}

impl AutomorphismGroup {
    pub fn new(carrier: Arc<FinitePoset>, maps: Vec<MonotoneMap>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for m in &maps {
            if **m.source() != *carrier || **m.target() != *carrier {
                return Err(Error::NotAutomorphism("map acts on a different poset".into()));
            }
            if !m.is_isomorphism() {
                return Err(Error::NotAutomorphism(format!("{m:?}")));
            }
            set.insert(m.values().to_vec());
        }
        let id: Vec<usize> = carrier.elements().collect();
        if !set.contains(&id) {
            return Err(Error::NotAGroup("identity missing".into()));
        }
        for f in &set {
            for g in &set {
                if !set.contains(&compose(f, g)) {
                    return Err(Error::NotAGroup("not closed under composition".into()));
                }
            }
        }
        Ok(Self::from_set(carrier, set))
    }

    fn from_set(carrier: Arc<FinitePoset>, mut set: BTreeSet<Vec<usize>>) -> Self {
        let id: Vec<usize> = carrier.elements().collect();
        set.remove(&id);
        let mut maps = vec![id];
        maps.extend(set);
        AutomorphismGroup { carrier, maps }
    }

    /// The whole automorphism group of `carrier`.
    pub fn full(carrier: Arc<FinitePoset>, limit: usize) -> Result<Self> {
        let maps = enumerate_automorphisms(&carrier, limit)?;
        Ok(Self::from_set(carrier, maps.iter().map(|m| m.values().to_vec()).collect()))
    }

    /// The subgroup generated by `generators`.
    pub fn generated_by(carrier: Arc<FinitePoset>, generators: &[MonotoneMap]) -> Result<Self> {
        for g in generators {
            if **g.source() != *carrier || !g.is_isomorphism() {
                return Err(Error::NotAutomorphism(format!("{g:?}")));
            }
        }
        let gens: Vec<Vec<usize>> = generators.iter().map(|g| g.values().to_vec()).collect();
        let id: Vec<usize> = carrier.elements().collect();
        Ok(Self::from_set(carrier, close(id, &gens, BTreeSet::new())))
    }

    pub fn carrier(&self) -> &Arc<FinitePoset> {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> Vec<MonotoneMap> {
        self.maps
            .iter()
            .map(|v| MonotoneMap::new_unchecked(self.carrier.clone(), self.carrier.clone(), v.clone()))
            .collect()
    }

    pub fn values(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn is_commutative(&self) -> bool {
        self.maps
            .iter()
            .all(|f| self.maps.iter().all(|g| compose(f, g) == compose(g, f)))
    }

    /// Least `k ≥ 1` with `a^k = id`, for the member at index `i`.
    pub fn order_of(&self, i: usize) -> usize {
        let a = &self.maps[i];
        let id = &self.maps[0];
        let mut power = a.clone();
        let mut k = 1;
        while &power != id {
            power = compose(a, &power);
            k += 1;
        }
        k
    }

    /// Every subgroup, smallest first.
    pub fn subgroups(&self) -> Vec<AutomorphismGroup> {
        let id = self.maps[0].clone();
        let trivial: BTreeSet<Vec<usize>> = [id.clone()].into();
        let mut found = vec![trivial];
        let mut i = 0;
        while i < found.len() {
            for g in &self.maps {
                if found[i].contains(g) {
                    continue;
                }
                let bigger = close(id.clone(), std::slice::from_ref(g), found[i].clone());
                if !found.contains(&bigger) {
                    found.push(bigger);
                }
            }
            i += 1;
        }
        found.sort_by_key(|s| (s.len(), s.iter().cloned().collect::<Vec<_>>()));
        found
            .into_iter()
            .map(|s| Self::from_set(self.carrier.clone(), s))
            .collect()
    }
}

/// Closure of `start ∪ gens ∪ {id}` under composition.
fn close(id: Vec<usize>, gens: &[Vec<usize>], start: BTreeSet<Vec<usize>>) -> BTreeSet<Vec<usize>> {
    let mut set = start;
    set.insert(id);
    set.extend(gens.iter().cloned());
    loop {
        let mut added = Vec::new();
        for f in &set {
            for g in &set {
                let h = compose(f, g);
                if !set.contains(&h) {
                    added.push(h);
                }
            }
        }
        if added.is_empty() {
            return set;
        }
        set.extend(added);
    }
}

/// For all `a, a′`: if `aⁿ ≤ a′` for every `n ≥ 1` then `a ≤ id`. Powers
/// of a member of a finite group cycle with period its order, so checking
/// `n = 1, ..., order(a)` covers every exponent.
pub fn is_completely_integrally_closed(group: &AutomorphismGroup) -> bool {
    let p = &group.carrier;
    let leq = |f: &[usize], g: &[usize]| f.iter().zip(g).all(|(&x, &y)| p.leq(x, y));
    let id = &group.maps[0];
    (0..group.len()).all(|i| {
        let a = &group.maps[i];
        let mut powers = vec![a.clone()];
        for _ in 1..group.order_of(i) {
            let next = compose(a, powers.last().unwrap());
            powers.push(next);
        }
        group
            .maps
            .iter()
            .all(|a2| !powers.iter().all(|an| leq(an, a2)) || leq(a, id))
    })
}

/// `BDar(id_A)` inside `OP(L)` together with the group-law checks.
#[derive(Debug, Clone)]
pub struct BdarResult {
    pub space_size: usize,
    pub darboux_size: usize,
    pub members: Vec<MonotoneMap>,
    pub is_cic: bool,
    pub is_commutative: bool,
    pub report: AuditReport,
}

pub fn bdar_of_group(group: &AutomorphismGroup, budget: usize) -> Result<BdarResult> {
    let carrier = group.carrier.clone();
    if !carrier.is_complete_lattice() {
        return Err(Error::NotCompleteLattice("automorphism carrier"));
    }
    let space = FunctionSpace::monotone_maps(carrier.clone(), carrier, budget)?;
    let a_set = BitSet::from_indices(
        space.len(),
        group
            .maps
            .iter()
            .map(|m| space.index_of(m).expect("automorphisms are monotone")),
    );
    let id_a = PartialMonotoneMap::identity_on(space.poset.clone(), &a_set);
    let darboux_size = extension_pair(&id_a)?.darboux_set().count();
    let bdar = bounded_darboux_set(&id_a)?;
    let id = space.identity().expect("endomap space");
    let name = |i: usize| space.poset.name(i).to_string();

    let is_commutative = group.is_commutative();
    let mut report = AuditReport::new("bounded_darboux_group");
    let mut c = report.check("contains_group");
    for a in a_set.iter() {
        c.expect(bdar.contains(a), name(a), "member of the group", "outside BDar");
    }
    report.assert("contains_identity", bdar.contains(id), || crate::report::Witness {
        element: name(id),
        lhs: "identity".into(),
        rhs: "outside BDar".into(),
    });
    let mut c = report.check("closed_under_composition");
    for f in bdar.iter() {
        for g in bdar.iter() {
            let h = space.compose(f, g).expect("composites of monotone maps are monotone");
            c.expect(bdar.contains(h), format!("{} ∘ {}", name(f), name(g)), name(h), "outside BDar");
        }
    }
    let mut c = report.check("inverses");
    for f in bdar.iter() {
        let has_inverse = bdar
            .iter()
            .any(|g| space.compose(f, g) == Some(id) && space.compose(g, f) == Some(id));
        c.expect(has_inverse, name(f), "no two-sided inverse in BDar", "");
    }
    if is_commutative {
        let mut c = report.check("commutative");
        for f in bdar.iter() {
            for g in bdar.iter() {
                let fg = space.compose(f, g).unwrap();
                let gf = space.compose(g, f).unwrap();
                c.expect(fg == gf, format!("{}, {}", name(f), name(g)), name(fg), name(gf));
            }
        }
    }
    Ok(BdarResult {
        space_size: space.len(),
        darboux_size,
        members: bdar.iter().map(|i| space.to_monotone_map(i)).collect(),
        is_cic: is_completely_integrally_closed(group),
        is_commutative,
        report,
    })
}

/// For `ψ : O ⇀ OP(L)` and `ψ′ : O′ ⇀ OP(L)` with values automorphisms,
/// composing the extensions pointwise equals extending the pointwise
/// composite `(x, x′) ↦ ψ(x) ∘ ψ′(x′)` on `dom ψ × dom ψ′`.
pub fn audit_composition_product(
    psi: &PartialMonotoneMap,
    psi2: &PartialMonotoneMap,
    space: &FunctionSpace,
) -> Result<AuditReport> {
    if **psi.target() != *space.poset || **psi2.target() != *space.poset {
        return Err(Error::Mismatch("targets are not the given endomap space".into()));
    }
    if *space.source != *space.target {
        return Err(Error::Mismatch("function space is not an endomap space".into()));
    }
    for m in psi.values().iter().chain(psi2.values()).flatten() {
        if !space.to_monotone_map(*m).is_isomorphism() {
            return Err(Error::HypothesisViolated(format!(
                "value {} is not an automorphism",
                space.poset.name(*m)
            )));
        }
    }
    let prod = product(psi.source().clone(), psi2.source().clone());
    let mut values = vec![None; prod.poset.len()];
    for x in psi.domain_vec() {
        for x2 in psi2.domain_vec() {
            let f = psi.get(x).unwrap();
            let g = psi2.get(x2).unwrap();
            values[prod.pair(x, x2)] = space.compose(f, g);
        }
    }
    let mu = PartialMonotoneMap::new(prod.poset.clone(), space.poset.clone(), values)?;
    let e = extension_pair(psi)?;
    let e2 = extension_pair(psi2)?;
    let e_mu = extension_pair(&mu)?;
    let mut report = AuditReport::new("composition_product");
    for (side, a, b, whole) in [
        ("lower", &e.lower, &e2.lower, &e_mu.lower),
        ("upper", &e.upper, &e2.upper, &e_mu.upper),
    ] {
        let mut c = report.check(format!("composed_{side}_extensions"));
        for x in psi.source().elements() {
            for x2 in psi2.source().elements() {
                let lhs = space.compose(a.apply(x), b.apply(x2)).expect("monotone composite");
                let rhs = whole.apply(prod.pair(x, x2));
                c.expect(
                    lhs == rhs,
                    prod.poset.name(prod.pair(x, x2)),
                    space.poset.name(lhs),
                    space.poset.name(rhs),
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{augment, make_poset};

    fn diamond() -> Arc<FinitePoset> {
        augment(&make_poset(&["a", "b"], &[]).unwrap()).into_arc()
    }

    #[test]
    fn trivial_group() {
        let d = diamond();
        let g = AutomorphismGroup::generated_by(d, &[]).unwrap();
        assert_eq!(g.len(), 1);
        assert!(is_completely_integrally_closed(&g));
        let r = bdar_of_group(&g, 10_000).unwrap();
        assert_eq!(r.members.len(), 1);
        assert!(r.report.passed, "{:?}", r.report);
    }

    #[test]
    fn diamond_group_is_its_own_bdar() {
        let g = AutomorphismGroup::full(diamond(), 10).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.is_commutative());
        assert!(is_completely_integrally_closed(&g));
        assert_eq!(g.subgroups().len(), 2);
        let r = bdar_of_group(&g, 10_000).unwrap();
        let members: Vec<Vec<usize>> = r.members.iter().map(|m| m.values().to_vec()).collect();
        assert_eq!(members, g.values().to_vec());
        assert!(r.report.passed, "{:?}", r.report);
    }

    #[test]
    fn m3_has_six_subgroups() {
        // Subgroups of S3: trivial, three of order 2, one of order 3, S3.
        let m3 = augment(&make_poset(&["a", "b", "c"], &[]).unwrap()).into_arc();
        let g = AutomorphismGroup::full(m3, 10).unwrap();
        assert_eq!(g.len(), 6);
        assert!(!g.is_commutative());
        let sizes: Vec<usize> = g.subgroups().iter().map(AutomorphismGroup::len).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn non_group_rejected() {
        let m3 = augment(&make_poset(&["a", "b", "c"], &[]).unwrap()).into_arc();
        let all = AutomorphismGroup::full(m3.clone(), 10).unwrap().maps();
        let order_three = all.iter().find(|m| m.apply(0) == 1 && m.apply(1) == 2).unwrap().clone();
        let err = AutomorphismGroup::new(m3, vec![all[0].clone(), order_three]).unwrap_err();
        assert_eq!(err.code(), "NotAGroup");
    }
}
