//! Numerical audits of the translation action and the semifield laws. Two
//! expressions for the same real are accepted when their enclosures at the
//! requested tolerance overlap and each has width at most the tolerance.

use std::cmp::Ordering;

use crate::error::Result;
use crate::rational::{format_rational, Rational};
use crate::report::{AuditReport, CheckBuilder};

use super::{CutBudget, Enclosure, RationalCut};

fn agree(c: &mut CheckBuilder<'_>, element: String, a: &Enclosure, b: &Enclosure, eps: &Rational) {
    let ok = a.overlaps(b) && &a.width() <= eps && &b.width() <= eps;
    c.expect(ok, element, a.to_string(), b.to_string());
}

/// Translation by rationals acts on cuts: each translation preserves strict
/// order between separated cuts, translations compose additively, and
/// translating zero by `r` gives exactly `r`.
pub fn audit_translation_group(
    shifts: &[Rational],
    cuts: &[RationalCut],
    eps: &Rational,
    budget: CutBudget,
) -> Result<AuditReport> {
    let shift = |x: &RationalCut, r: &Rational| x.add(&RationalCut::from_rational(r.clone()));
    let mut report = AuditReport::new("translation_group");

    let enclosures: Vec<Enclosure> = cuts.iter().map(|x| x.refine(eps, budget)).collect::<Result<_>>()?;
    let mut c = report.check("order_embedding");
    for r in shifts {
        let moved: Vec<Enclosure> = cuts
            .iter()
            .map(|x| shift(x, r)?.refine(eps, budget))
            .collect::<Result<_>>()?;
        for i in 0..cuts.len() {
            for j in 0..cuts.len() {
                if enclosures[i].hi < enclosures[j].lo {
                    let ok = moved[i].hi < moved[j].lo;
                    c.expect(
                        ok,
                        format!("x{i} < x{j} shifted by {}", format_rational(r)),
                        moved[i].to_string(),
                        moved[j].to_string(),
                    );
                }
            }
        }
    }

    let mut c = report.check("composition");
    for r in shifts {
        for s in shifts {
            for (i, x) in cuts.iter().enumerate() {
                let twice = shift(&shift(x, s)?, r)?.refine(eps, budget)?;
                let once = shift(x, &(r + s))?.refine(eps, budget)?;
                let label = format!("x{i} shifted by {} then {}", format_rational(s), format_rational(r));
                agree(&mut c, label, &twice, &once, eps);
            }
        }
    }

    let mut c = report.check("evaluation_at_zero");
    let zero = RationalCut::from_int(0);
    for r in shifts {
        let e = shift(&zero, r)?.refine(eps, budget)?;
        c.expect(
            e == Enclosure::point(r.clone()),
            format!("0 shifted by {}", format_rational(r)),
            e.to_string(),
            format_rational(r),
        );
    }
    Ok(report)
}

/// Commutativity, associativity and distributivity of `+` and `·` on three
/// cuts, plus the units `x + 0 = x` and `x · 1 = x`. Products use the signed
/// product; the audit reports the multiplicative laws only when all three
/// cuts are positive.
pub fn audit_semifield(
    x: &RationalCut,
    y: &RationalCut,
    z: &RationalCut,
    eps: &Rational,
    budget: CutBudget,
) -> Result<AuditReport> {
    let r = |v: Result<RationalCut>| -> Result<Enclosure> { v?.refine(eps, budget) };
    let mul = |a: &RationalCut, b: &RationalCut| a.mul_signed(b, budget);
    let mut report = AuditReport::new("semifield");

    let pairs: Vec<(&str, Enclosure, Enclosure)> = vec![
        ("additive_commutativity", r(x.add(y))?, r(y.add(x))?),
        ("additive_associativity", r(x.add(y)?.add(z))?, r(x.add(&y.add(z)?))?),
        ("additive_unit", r(x.add(&RationalCut::from_int(0)))?, x.refine(eps, budget)?),
        ("multiplicative_commutativity", r(mul(x, y))?, r(mul(y, x))?),
        ("multiplicative_associativity", r(mul(&mul(x, y)?, z))?, r(mul(x, &mul(y, z)?))?),
        ("multiplicative_unit", r(mul(x, &RationalCut::from_int(1)))?, x.refine(eps, budget)?),
        ("distributivity", r(mul(x, &y.add(z)?))?, r(mul(x, y)?.add(&mul(x, z)?))?),
    ];
    for (name, lhs, rhs) in pairs {
        let mut c = report.check(name);
        agree(&mut c, "x, y, z".into(), &lhs, &rhs, eps);
    }
    let positive = [x, y, z]
        .iter()
        .map(|v| v.sign(budget))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|s| *s == Ordering::Greater);
    if positive {
        let prod = r(mul(x, y))?;
        report.assert("positive_closure", prod.lo > Rational::from_integer(0.into()), || {
            crate::report::Witness {
                element: "x · y".into(),
                lhs: prod.to_string(),
                rhs: "> 0".into(),
            }
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn sqrt(n: i64) -> RationalCut {
        RationalCut::sqrt(&int(n)).unwrap()
    }

    #[test]
    fn translations_form_a_group_action() {
        let shifts = [int(-2), rat(1, 3), int(0), rat(7, 2)];
        let cuts = [sqrt(2), sqrt(3), RationalCut::from_rational(rat(-1, 5))];
        let report = audit_translation_group(&shifts, &cuts, &rat(1, 1 << 30), CutBudget::default()).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn semifield_on_square_roots() {
        let eps = rat(1, 1_000_000_000);
        let report = audit_semifield(&sqrt(2), &sqrt(3), &sqrt(5), &eps, CutBudget::default()).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.get("positive_closure").is_some());
    }
}
