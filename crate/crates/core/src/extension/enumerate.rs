use crate::error::{Error, Result};
use crate::poset::MonotoneMap;

use super::{extension_pair, ExtensionPair, PartialMonotoneMap};

/// Every total monotone extension of `psi`, in lexicographic order of value
/// vectors. `budget` bounds the number of search nodes visited.
pub fn enumerate_extensions(psi: &PartialMonotoneMap, budget: usize) -> Result<Vec<MonotoneMap>> {
    let source = psi.source();
    let target = psi.target();
    let order = source.linear_extension();
    // Values an element may take given only the domain: at least ψ(y) for
    // domain y below it, at most ψ(z) for domain z above it.
    let allowed: Vec<Vec<usize>> = source
        .elements()
        .map(|x| match psi.get(x) {
            Some(v) => vec![v],
            None => target
                .elements()
                .filter(|&v| {
                    source
                        .down_set(x)
                        .iter()
                        .all(|y| psi.get(y).map_or(true, |w| target.leq(w, v)))
                        && source
                            .up_set(x)
                            .iter()
                            .all(|z| psi.get(z).map_or(true, |w| target.leq(v, w)))
                })
                .collect(),
        })
        .collect();
    let preds: Vec<Vec<usize>> = source
        .elements()
        .map(|x| source.down_set(x).iter().filter(|&y| y != x).collect())
        .collect();

    struct Search<'a> {
        order: &'a [usize],
        allowed: &'a [Vec<usize>],
        preds: &'a [Vec<usize>],
        target: &'a crate::poset::FinitePoset,
        values: Vec<usize>,
        out: Vec<Vec<usize>>,
        nodes: usize,
        budget: usize,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SizeLimitExceeded {
                    what: "extension search nodes",
                    limit: self.budget,
                });
            }
            let Some(&x) = self.order.get(depth) else {
                self.out.push(self.values.clone());
                return Ok(());
            };
            for i in 0..self.allowed[x].len() {
                let v = self.allowed[x][i];
                if self.preds[x].iter().all(|&y| self.target.leq(self.values[y], v)) {
                    self.values[x] = v;
                    self.run(depth + 1)?;
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        order: &order,
        allowed: &allowed,
        preds: &preds,
        target,
        values: vec![usize::MAX; source.len()],
        out: Vec::new(),
        nodes: 0,
        budget,
    };
    search.run(0)?;
    let mut out = search.out;
    out.sort();
    Ok(out
        .into_iter()
        .map(|v| MonotoneMap::new_unchecked(source.clone(), target.clone(), v))
        .collect())
}

/// Outcome of deciding extremizability by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extremizability {
    Extremizable(ExtensionPair),
    /// Extensions exist but at least one of the pointwise extremes is not
    /// attained; the attained one, if any, is reported.
    NotExtremizable {
        lower: Option<MonotoneMap>,
        upper: Option<MonotoneMap>,
    },
    NoExtension,
}

impl Extremizability {
    pub fn pair(&self) -> Option<&ExtensionPair> {
        match self {
            Extremizability::Extremizable(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_extremizable(&self) -> bool {
        self.pair().is_some()
    }
}

/// Decides whether the set of extensions has a pointwise least and greatest
/// member, for any target.
pub fn check_extremizable_general(psi: &PartialMonotoneMap, budget: usize) -> Result<Extremizability> {
    let all = enumerate_extensions(psi, budget)?;
    if all.is_empty() {
        return Ok(Extremizability::NoExtension);
    }
    let lower = all.iter().find(|f| all.iter().all(|g| f.leq_pointwise(g))).cloned();
    let upper = all.iter().find(|f| all.iter().all(|g| g.leq_pointwise(f))).cloned();
    Ok(match (lower, upper) {
        (Some(lower), Some(upper)) => Extremizability::Extremizable(ExtensionPair { lower, upper }),
        (lower, upper) => Extremizability::NotExtremizable { lower, upper },
    })
}

/// Lattice formulas when the target is a complete lattice, exhaustive search
/// otherwise.
pub fn extremize(psi: &PartialMonotoneMap, budget: usize) -> Result<Extremizability> {
    if psi.target().is_complete_lattice() {
        extension_pair(psi).map(Extremizability::Extremizable)
    } else {
        check_extremizable_general(psi, budget)
    }
}
