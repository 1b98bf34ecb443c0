//! Brute-force and structural audits of extension identities. Each returns
//! an [`AuditReport`] with a witness for every failing element.

use crate::error::{Error, Result};
use crate::poset::{FunctionSpace, MonotoneMap, ProductPoset};
use crate::report::AuditReport;

use super::{enumerate_extensions, extension_pair, extremize, ExtensionPair, PartialMonotoneMap};

fn require_pair(psi: &PartialMonotoneMap, label: &str, budget: usize) -> Result<ExtensionPair> {
    extremize(psi, budget)?
        .pair()
        .cloned()
        .ok_or_else(|| Error::HypothesisViolated(format!("{label} is not extremizable")))
}

/// Compares the closed-form extensions with the pointwise extremes of the
/// exhaustively enumerated extension set.
pub fn audit_sandwich(psi: &PartialMonotoneMap, budget: usize) -> Result<AuditReport> {
    let pair = require_pair(psi, "the partial map", budget)?;
    let all = enumerate_extensions(psi, budget)?;
    let s = psi.source();
    let t = psi.target();
    let mut report = AuditReport::new("sandwich");

    for (name, f) in [("lower_is_extension", &pair.lower), ("upper_is_extension", &pair.upper)] {
        let mut c = report.check(name);
        for x in psi.domain_vec() {
            let v = psi.get(x).unwrap();
            c.expect(f.apply(x) == v, s.name(x), t.name(f.apply(x)), t.name(v));
        }
    }
    let mut c = report.check("lower_below_every_extension");
    for f in &all {
        for x in s.elements() {
            c.expect(
                t.leq(pair.lower.apply(x), f.apply(x)),
                s.name(x),
                t.name(pair.lower.apply(x)),
                t.name(f.apply(x)),
            );
        }
    }
    let mut c = report.check("upper_above_every_extension");
    for f in &all {
        for x in s.elements() {
            c.expect(
                t.leq(f.apply(x), pair.upper.apply(x)),
                s.name(x),
                t.name(f.apply(x)),
                t.name(pair.upper.apply(x)),
            );
        }
    }
    report.assert(
        "extremes_are_enumerated",
        all.contains(&pair.lower) && all.contains(&pair.upper),
        || crate::report::Witness {
            element: "-".into(),
            lhs: format!("{:?}", pair.lower),
            rhs: format!("{:?}", pair.upper),
        },
    );
    Ok(report)
}

/// Composition chain for `ψ₁ : O₁ ⇀ O₂` and `ψ₂ : O₂ ⇀ O₃`:
/// `lex(ψ₂∘ψ₁) ≤ lex ψ₂ ∘ lex ψ₁ ≤ uex ψ₂ ∘ uex ψ₁ ≤ uex(ψ₂∘ψ₁)`, the image
/// of `Dar(ψ₂∘ψ₁) ∩ Dar(ψ₁)` under `ex ψ₁` lies in `Dar(ψ₂)`, and the
/// Darboux extensions compose there.
pub fn audit_composition(psi1: &PartialMonotoneMap, psi2: &PartialMonotoneMap, budget: usize) -> Result<AuditReport> {
    if **psi1.target() != **psi2.source() {
        return Err(Error::Mismatch("target of the first map is not the source of the second".into()));
    }
    let image = psi1.image();
    if !psi2.domain().is_subset(&image) {
        return Err(Error::HypothesisViolated(
            "domain of the second map is not contained in the image of the first".into(),
        ));
    }
    let composite = psi1.then(psi2)?;
    let e1 = require_pair(psi1, "the first map", budget)?;
    let e2 = require_pair(psi2, "the second map", budget)?;
    let e12 = require_pair(&composite, "the composite", budget)?;

    let s = psi1.source();
    let t = psi2.target();
    let ll: Vec<usize> = s.elements().map(|x| e2.lower.apply(e1.lower.apply(x))).collect();
    let uu: Vec<usize> = s.elements().map(|x| e2.upper.apply(e1.upper.apply(x))).collect();

    let mut report = AuditReport::new("composition");
    let chain = [
        ("lex_composite_le_lex_after_lex", e12.lower.values(), &ll[..]),
        ("lex_after_lex_le_uex_after_uex", &ll[..], &uu[..]),
        ("uex_after_uex_le_uex_composite", &uu[..], e12.upper.values()),
    ];
    for (name, lhs, rhs) in chain {
        let mut c = report.check(name);
        for x in s.elements() {
            c.expect(t.leq(lhs[x], rhs[x]), s.name(x), t.name(lhs[x]), t.name(rhs[x]));
        }
    }

    let mut both = e12.darboux_set();
    both.intersect_with(&e1.darboux_set());
    let dar2 = e2.darboux_set();
    let mid = psi1.target();
    let mut c = report.check("darboux_image");
    for x in both.iter() {
        let y = e1.lower.apply(x);
        c.expect(dar2.contains(y), s.name(x), mid.name(y), "outside the second Darboux set");
    }
    let mut c = report.check("darboux_extensions_compose");
    for x in both.iter() {
        let y = e1.lower.apply(x);
        let lhs = e2.lower.apply(y);
        let ok = dar2.contains(y) && lhs == e12.lower.apply(x);
        c.expect(ok, s.name(x), t.name(lhs), t.name(e12.lower.apply(x)));
    }
    Ok(report)
}

/// Projections commute with both extensions of a map into a product.
pub fn audit_product(psi: &PartialMonotoneMap, product: &ProductPoset) -> Result<AuditReport> {
    if **psi.target() != *product.poset {
        return Err(Error::Mismatch("target is not the given product".into()));
    }
    for factor in [&product.left, &product.right] {
        if !factor.is_complete_lattice() {
            return Err(Error::NotCompleteLattice("product factor"));
        }
    }
    let pair = extension_pair(psi)?;
    let s = psi.source();
    let mut report = AuditReport::new("product");
    for (i, factor) in [&product.left, &product.right].into_iter().enumerate() {
        let projected = psi.map_with(factor.clone(), |v| product.project(i, v));
        let pi = extension_pair(&projected)?;
        for (side, whole, part) in [("lower", &pair.lower, &pi.lower), ("upper", &pair.upper, &pi.upper)] {
            let mut c = report.check(format!("projection_{}_{side}", i + 1));
            for x in s.elements() {
                let lhs = product.project(i, whole.apply(x));
                let rhs = part.apply(x);
                c.expect(lhs == rhs, s.name(x), factor.name(lhs), factor.name(rhs));
            }
        }
    }
    Ok(report)
}

/// Evaluation at each point of `points` commutes with both extensions of a
/// map into the function space `OP(P, P′)`.
pub fn audit_evaluation(psi: &PartialMonotoneMap, space: &FunctionSpace, points: &[usize]) -> Result<AuditReport> {
    if **psi.target() != *space.poset {
        return Err(Error::Mismatch("target is not the given function space".into()));
    }
    if !space.target.is_complete_lattice() {
        return Err(Error::NotCompleteLattice("function space codomain"));
    }
    let pair = extension_pair(psi)?;
    let s = psi.source();
    let t = &space.target;
    let mut report = AuditReport::new("evaluation");
    for side in ["lower", "upper"] {
        let mut c = report.check(format!("evaluation_{side}"));
        for &p in points {
            let evaluated = psi.map_with(t.clone(), |f| space.evaluate(f, p));
            let ep = extension_pair(&evaluated)?;
            let (whole, part): (&MonotoneMap, &MonotoneMap) = match side {
                "lower" => (&pair.lower, &ep.lower),
                _ => (&pair.upper, &ep.upper),
            };
            for x in s.elements() {
                let lhs = space.evaluate(whole.apply(x), p);
                let rhs = part.apply(x);
                c.expect(
                    lhs == rhs,
                    format!("{} at {}", s.name(x), space.source.name(p)),
                    t.name(lhs),
                    t.name(rhs),
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::extension::DEFAULT_SEARCH_BUDGET;
    use crate::poset::{augment, make_poset, product, BitSet, FinitePoset};

    fn chain(n: usize) -> Arc<FinitePoset> {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> = (1..n).map(|i| ((i - 1).to_string(), i.to_string())).collect();
        Arc::new(make_poset(&names, &covers).unwrap())
    }

    #[test]
    fn composition_with_total_identity() {
        let src = chain(3);
        let mid = augment(&make_poset(&["m"], &[]).unwrap()).into_arc();
        let psi1 = PartialMonotoneMap::from_pairs(src, mid.clone(), &[(1, 0)]).unwrap();
        let id = PartialMonotoneMap::identity_on(mid.clone(), &BitSet::full(mid.len()));
        let id = id.restrict(&psi1.image());
        let report = audit_composition(&psi1, &id, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn composition_hypothesis_enforced() {
        let src = chain(2);
        let mid = chain(3);
        let psi1 = PartialMonotoneMap::from_pairs(src, mid.clone(), &[(0, 0)]).unwrap();
        let psi2 = PartialMonotoneMap::from_pairs(mid, chain(2), &[(2, 1)]).unwrap();
        let err = audit_composition(&psi1, &psi2, 100).unwrap_err();
        assert_eq!(err.code(), "HypothesisViolated");
    }

    #[test]
    fn product_with_equal_components() {
        let l = chain(3);
        let prod = product(l.clone(), l.clone());
        let src = chain(3);
        let psi = PartialMonotoneMap::from_pairs(src, prod.poset.clone(), &[(1, prod.pair(1, 1))]).unwrap();
        let report = audit_product(&psi, &prod).unwrap();
        assert!(report.passed, "{report:?}");
        let pair = extension_pair(&psi).unwrap();
        for x in 0..3 {
            let v = pair.lower.apply(x);
            assert_eq!(prod.project(0, v), prod.project(1, v));
        }
    }

    #[test]
    fn evaluation_on_one_point_space() {
        let space = FunctionSpace::monotone_maps(chain(1), chain(3), 100).unwrap();
        let src = chain(3);
        let psi = PartialMonotoneMap::from_pairs(src, space.poset.clone(), &[(1, 1)]).unwrap();
        let report = audit_evaluation(&psi, &space, &[0]).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn sandwich_on_delta() {
        let src = chain(3);
        let tgt = augment(&make_poset(&["m"], &[]).unwrap()).into_arc();
        let psi = PartialMonotoneMap::from_pairs(src, tgt, &[(1, 0)]).unwrap();
        assert!(audit_sandwich(&psi, 1000).unwrap().passed);
    }
}
