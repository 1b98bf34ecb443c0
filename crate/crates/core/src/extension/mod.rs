//! Lower and upper extensions of partial monotone maps.
//!
//! For a target that is a finite complete lattice the extensions have closed
//! forms: `lex(x)` is the join of `ψ(y)` over domain elements `y ≤ x` and
//! `uex(x)` the meet of `ψ(y)` over domain elements `y ≥ x`, with the empty
//! join at the bottom and the empty meet at the top. For any other target the
//! only available route is [`enumerate_extensions`], which
//! [`check_extremizable_general`] builds on.

mod audit;
mod enumerate;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{BitSet, FinitePoset, MonotoneMap, PosetJson};

pub use audit::{audit_composition, audit_evaluation, audit_product, audit_sandwich};
pub use enumerate::{check_extremizable_general, enumerate_extensions, extremize, Extremizability};

/// Default node budget for exhaustive extension search.
pub const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

/// A monotone map defined on a subset of its source.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialMonotoneMap {
    source: Arc<FinitePoset>,
    target: Arc<FinitePoset>,
    values: Vec<Option<usize>>,
}

/// Wire form: `{"source": poset, "target": poset, "map": {elem: elem}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialMapJson {
    pub source: PosetJson,
    pub target: PosetJson,
    #[serde(default)]
    pub map: BTreeMap<String, String>,
}

impl PartialMonotoneMap {
    pub fn new(source: Arc<FinitePoset>, target: Arc<FinitePoset>, values: Vec<Option<usize>>) -> Result<Self> {
        if values.len() != source.len() {
            return Err(Error::Invalid(format!(
                "assignment has {} slots for {} elements",
                values.len(),
                source.len()
            )));
        }
        if let Some(bad) = values.iter().flatten().find(|&&v| v >= target.len()) {
            return Err(Error::Invalid(format!("target index {bad} out of range")));
        }
        for x in source.elements() {
            let Some(vx) = values[x] else { continue };
            for y in source.up_set(x).iter() {
                if let Some(vy) = values[y] {
                    if !target.leq(vx, vy) {
                        return Err(Error::NotMonotone(format!(
                            "{} ≤ {} but images {} ≰ {}",
                            source.name(x),
                            source.name(y),
                            target.name(vx),
                            target.name(vy)
                        )));
                    }
                }
            }
        }
        Ok(PartialMonotoneMap { source, target, values })
    }

    pub(crate) fn new_unchecked(source: Arc<FinitePoset>, target: Arc<FinitePoset>, values: Vec<Option<usize>>) -> Self {
        PartialMonotoneMap { source, target, values }
    }

    pub fn from_pairs(source: Arc<FinitePoset>, target: Arc<FinitePoset>, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut values = vec![None; source.len()];
        for &(x, v) in pairs {
            if x >= source.len() {
                return Err(Error::Invalid(format!("source index {x} out of range")));
            }
            values[x] = Some(v);
        }
        Self::new(source, target, values)
    }

    /// The partial map with empty domain.
    pub fn empty(source: Arc<FinitePoset>, target: Arc<FinitePoset>) -> Self {
        let values = vec![None; source.len()];
        PartialMonotoneMap { source, target, values }
    }

    pub fn total(f: &MonotoneMap) -> Self {
        PartialMonotoneMap {
            source: f.source().clone(),
            target: f.target().clone(),
            values: f.values().iter().map(|&v| Some(v)).collect(),
        }
    }

    /// Identity of `p` restricted to `domain`.
    pub fn identity_on(p: Arc<FinitePoset>, domain: &BitSet) -> Self {
        let values = p.elements().map(|x| domain.contains(x).then_some(x)).collect();
        PartialMonotoneMap {
            source: p.clone(),
            target: p,
            values,
        }
    }

    pub fn from_json(json: &PartialMapJson) -> Result<Self> {
        let source = Arc::new(FinitePoset::from_json(&json.source)?);
        let target = Arc::new(FinitePoset::from_json(&json.target)?);
        Self::from_named(source, target, &json.map)
    }

    pub fn from_named(source: Arc<FinitePoset>, target: Arc<FinitePoset>, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut values = vec![None; source.len()];
        for (k, v) in map {
            values[source.require(k)?] = Some(target.require(v)?);
        }
        Self::new(source, target, values)
    }

    pub fn to_json(&self) -> PartialMapJson {
        PartialMapJson {
            source: self.source.to_json(),
            target: self.target.to_json(),
            map: self.to_named(),
        }
    }

    pub fn to_named(&self) -> BTreeMap<String, String> {
        self.domain_vec()
            .into_iter()
            .map(|x| (self.source.name(x).to_string(), self.target.name(self.values[x].unwrap()).to_string()))
            .collect()
    }

    pub fn source(&self) -> &Arc<FinitePoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePoset> {
        &self.target
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.values[x]
    }

    pub fn values(&self) -> &[Option<usize>] {
        &self.values
    }

    pub fn domain(&self) -> BitSet {
        BitSet::from_indices(self.source.len(), self.domain_vec())
    }

    pub fn domain_vec(&self) -> Vec<usize> {
        self.source.elements().filter(|&x| self.values[x].is_some()).collect()
    }

    pub fn image(&self) -> BitSet {
        BitSet::from_indices(self.target.len(), self.values.iter().flatten().copied())
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Every element lies between two domain elements.
    pub fn is_encompassing(&self) -> bool {
        bounded_set(self).elements.count() == self.source.len()
    }

    pub fn restrict(&self, domain: &BitSet) -> Self {
        let values = self
            .source
            .elements()
            .map(|x| if domain.contains(x) { self.values[x] } else { None })
            .collect();
        PartialMonotoneMap::new_unchecked(self.source.clone(), self.target.clone(), values)
    }

    /// `next ∘ self`, defined where `self(x)` lies in the domain of `next`.
    pub fn then(&self, next: &PartialMonotoneMap) -> Result<Self> {
        if *self.target != *next.source {
            return Err(Error::Mismatch("composition through different posets".into()));
        }
        let values = self.values.iter().map(|v| v.and_then(|v| next.values[v])).collect();
        Ok(PartialMonotoneMap::new_unchecked(self.source.clone(), next.target.clone(), values))
    }

    /// `g ∘ self` for a total monotone `g`.
    pub fn map_values(&self, g: &MonotoneMap) -> Result<Self> {
        self.then(&PartialMonotoneMap::total(g))
    }

    /// Post-composition with an index map known to be monotone into `target`.
    pub(crate) fn map_with(&self, target: Arc<FinitePoset>, g: impl Fn(usize) -> usize) -> Self {
        let values = self.values.iter().map(|v| v.map(&g)).collect();
        PartialMonotoneMap::new_unchecked(self.source.clone(), target, values)
    }

    /// Whether the total map `f` agrees with `self` on its domain.
    pub fn is_extended_by(&self, f: &[usize]) -> bool {
        self.values
            .iter()
            .zip(f)
            .all(|(v, &fv)| v.map_or(true, |v| v == fv))
    }
}

impl std::fmt::Debug for PartialMonotoneMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.to_named()).finish()
    }
}

/// Random monotone partial map whose domain contains each element with
/// probability `domain_density`. Returns `None` if no monotone assignment
/// exists on the drawn domain (impossible when the target has a top).
pub fn random_partial_map<R: Rng + ?Sized>(
    rng: &mut R,
    source: Arc<FinitePoset>,
    target: Arc<FinitePoset>,
    domain_density: f64,
) -> Option<PartialMonotoneMap> {
    let domain: Vec<usize> = source
        .linear_extension()
        .into_iter()
        .filter(|_| rng.gen_bool(domain_density))
        .collect();
    let mut values = vec![None; source.len()];

    fn fill<R: Rng + ?Sized>(
        rng: &mut R,
        depth: usize,
        domain: &[usize],
        source: &FinitePoset,
        target: &FinitePoset,
        values: &mut Vec<Option<usize>>,
    ) -> bool {
        let Some(&x) = domain.get(depth) else { return true };
        let mut candidates: Vec<usize> = target
            .elements()
            .filter(|&v| {
                domain[..depth]
                    .iter()
                    .all(|&y| !source.leq(y, x) || target.leq(values[y].unwrap(), v))
            })
            .collect();
        candidates.shuffle(rng);
        for v in candidates {
            values[x] = Some(v);
            if fill(rng, depth + 1, domain, source, target, values) {
                return true;
            }
        }
        values[x] = None;
        false
    }

    fill(rng, 0, &domain, &source, &target, &mut values)
        .then(|| PartialMonotoneMap::new_unchecked(source, target, values))
}

fn require_lattice(psi: &PartialMonotoneMap) -> Result<()> {
    if psi.target.is_complete_lattice() {
        Ok(())
    } else {
        Err(Error::NotCompleteLattice("target"))
    }
}

/// `lex_ψ(x) = sup {ψ(y) : y ≤ x, y ∈ dom ψ}`, with `sup ∅` the bottom.
pub fn lower_extension(psi: &PartialMonotoneMap) -> Result<MonotoneMap> {
    require_lattice(psi)?;
    let s = &psi.source;
    let values = s
        .elements()
        .map(|x| {
            psi.target
                .sup(s.down_set(x).iter().filter_map(|y| psi.values[y]))
                .expect("complete lattice has all joins")
        })
        .collect();
    Ok(MonotoneMap::new_unchecked(psi.source.clone(), psi.target.clone(), values))
}

/// `uex_ψ(x) = inf {ψ(y) : x ≤ y, y ∈ dom ψ}`, with `inf ∅` the top.
pub fn upper_extension(psi: &PartialMonotoneMap) -> Result<MonotoneMap> {
    require_lattice(psi)?;
    let s = &psi.source;
    let values = s
        .elements()
        .map(|x| {
            psi.target
                .inf(s.up_set(x).iter().filter_map(|y| psi.values[y]))
                .expect("complete lattice has all meets")
        })
        .collect();
    Ok(MonotoneMap::new_unchecked(psi.source.clone(), psi.target.clone(), values))
}

/// The pointwise least and greatest extensions of a partial map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionPair {
    pub lower: MonotoneMap,
    pub upper: MonotoneMap,
}

impl ExtensionPair {
    /// `{x : lex(x) = uex(x)}`.
    pub fn darboux_set(&self) -> BitSet {
        let n = self.lower.source().len();
        BitSet::from_indices(n, (0..n).filter(|&x| self.lower.apply(x) == self.upper.apply(x)))
    }

    /// The common value of both extensions on the Darboux set.
    pub fn darboux_extension(&self) -> PartialMonotoneMap {
        let dar = self.darboux_set();
        let values = (0..self.lower.source().len())
            .map(|x| dar.contains(x).then(|| self.lower.apply(x)))
            .collect();
        PartialMonotoneMap::new_unchecked(self.lower.source().clone(), self.lower.target().clone(), values)
    }
}

/// Both extensions through the lattice formulas.
pub fn extension_pair(psi: &PartialMonotoneMap) -> Result<ExtensionPair> {
    Ok(ExtensionPair {
        lower: lower_extension(psi)?,
        upper: upper_extension(psi)?,
    })
}

pub fn darboux_set(psi: &PartialMonotoneMap) -> Result<BitSet> {
    Ok(extension_pair(psi)?.darboux_set())
}

pub fn darboux_extension(psi: &PartialMonotoneMap) -> Result<PartialMonotoneMap> {
    Ok(extension_pair(psi)?.darboux_extension())
}

/// The elements sandwiched between two domain elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedSet {
    pub elements: BitSet,
}

pub fn bounded_set(psi: &PartialMonotoneMap) -> BoundedSet {
    let s = &psi.source;
    let dom = psi.domain();
    let elements = BitSet::from_indices(
        s.len(),
        s.elements().filter(|&x| {
            s.down_set(x).iter().any(|y| dom.contains(y)) && s.up_set(x).iter().any(|z| dom.contains(z))
        }),
    );
    BoundedSet { elements }
}

/// `B(ψ) ∩ Dar(ψ)`.
pub fn bounded_darboux_set(psi: &PartialMonotoneMap) -> Result<BitSet> {
    let mut dar = darboux_set(psi)?;
    dar.intersect_with(&bounded_set(psi).elements);
    Ok(dar)
}
