use std::collections::HashMap;
use std::sync::Arc;

use super::{FinitePoset, MonotoneMap};
use crate::error::{Error, Result};

/// The poset `OP(S, T)` of all monotone maps `S → T` under the pointwise
/// order, materialized explicitly.
#[derive(Debug, Clone)]
pub struct FunctionSpace {
    pub poset: Arc<FinitePoset>,
    pub source: Arc<FinitePoset>,
    pub target: Arc<FinitePoset>,
    maps: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

/// Every monotone assignment `source → target`, in lexicographic order of
/// value vectors. Fails once more than `budget` maps have been produced.
pub fn enumerate_monotone(source: &FinitePoset, target: &FinitePoset, budget: usize) -> Result<Vec<Vec<usize>>> {
    let n = source.len();
    let order = source.linear_extension();
    let mut values = vec![usize::MAX; n];
    let mut out = Vec::new();

    fn step(
        depth: usize,
        order: &[usize],
        source: &FinitePoset,
        target: &FinitePoset,
        values: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: usize,
    ) -> Result<()> {
        if depth == order.len() {
            if out.len() == budget {
                return Err(Error::SizeLimitExceeded {
                    what: "number of monotone maps",
                    limit: budget,
                });
            }
            out.push(values.clone());
            return Ok(());
        }
        let x = order[depth];
        for v in target.elements() {
            let ok = order[..depth].iter().all(|&y| !source.leq(y, x) || target.leq(values[y], v));
            if ok {
                values[x] = v;
                step(depth + 1, order, source, target, values, out, budget)?;
            }
        }
        values[x] = usize::MAX;
        Ok(())
    }

    step(0, &order, source, target, &mut values, &mut out, budget)?;
    out.sort();
    Ok(out)
}

impl FunctionSpace {
    pub fn monotone_maps(source: Arc<FinitePoset>, target: Arc<FinitePoset>, budget: usize) -> Result<Self> {
        let maps = enumerate_monotone(&source, &target, budget)?;
        let names = maps
            .iter()
            .map(|m| {
                let parts: Vec<&str> = m.iter().map(|&v| target.name(v)).collect();
                format!("[{}]", parts.join(","))
            })
            .collect::<Vec<_>>();
        let leq = |i: usize, j: usize| maps[i].iter().zip(&maps[j]).all(|(&a, &b)| target.leq(a, b));
        let poset = FinitePoset::from_relation_unchecked(names.clone(), leq)
            .or_else(|_| {
                let names = (0..maps.len()).map(|i| format!("#{i}")).collect();
                FinitePoset::from_relation_unchecked(names, leq)
            })
            .expect("index names are unique");
        let index = maps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(FunctionSpace {
            poset: Arc::new(poset),
            source,
            target,
            maps,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Value vector of the map at poset index `i`.
    pub fn map(&self, i: usize) -> &[usize] {
        &self.maps[i]
    }

    pub fn to_monotone_map(&self, i: usize) -> MonotoneMap {
        MonotoneMap::new_unchecked(self.source.clone(), self.target.clone(), self.maps[i].clone())
    }

    pub fn index_of(&self, values: &[usize]) -> Option<usize> {
        self.index.get(values).copied()
    }

    /// `ev_p(f) = f(p)`.
    pub fn evaluate(&self, i: usize, p: usize) -> usize {
        self.maps[i][p]
    }

    /// Index of the identity when this is an endomap space.
    pub fn identity(&self) -> Option<usize> {
        if *self.source != *self.target {
            return None;
        }
        let id: Vec<usize> = self.source.elements().collect();
        self.index_of(&id)
    }

    /// Index of `f ∘ g` for endomaps (apply `g` first).
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        if *self.source != *self.target {
            return None;
        }
        let composed: Vec<usize> = self.maps[g].iter().map(|&v| self.maps[f][v]).collect();
        self.index_of(&composed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::make_poset;

    fn chain(n: usize) -> Arc<FinitePoset> {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> = (1..n).map(|i| ((i - 1).to_string(), i.to_string())).collect();
        Arc::new(make_poset(&names, &covers).unwrap())
    }

    #[test]
    fn counts_match_binomials() {
        // Monotone maps from an m-chain to an n-chain: C(m+n-1, m).
        let space = FunctionSpace::monotone_maps(chain(2), chain(3), 100).unwrap();
        assert_eq!(space.len(), 6);
        let space = FunctionSpace::monotone_maps(chain(3), chain(3), 100).unwrap();
        assert_eq!(space.len(), 10);
    }

    #[test]
    fn one_point_source_is_target() {
        let space = FunctionSpace::monotone_maps(chain(1), chain(3), 100).unwrap();
        assert!(crate::poset::are_isomorphic(&space.poset, &chain(3)));
    }

    #[test]
    fn composition_and_identity() {
        let space = FunctionSpace::monotone_maps(chain(3), chain(3), 100).unwrap();
        let id = space.identity().unwrap();
        for f in 0..space.len() {
            assert_eq!(space.compose(f, id), Some(f));
            assert_eq!(space.compose(id, f), Some(f));
        }
    }

    #[test]
    fn budget_enforced() {
        let err = FunctionSpace::monotone_maps(chain(3), chain(3), 5).unwrap_err();
        assert!(err.is_budget());
    }
}
