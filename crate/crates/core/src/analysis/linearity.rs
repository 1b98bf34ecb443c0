//! Audit of the linearity relations between the lower and upper extensions
//! of a linear functional: upper bounds are subadditive, lower bounds
//! superadditive, `-lex(f) = uex(-f)`, and the extension is additive on
//! functions where the two meet.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Extended, Rational};
use crate::report::{AuditReport, CheckBuilder};

use super::{darboux_sums, FunctionStages, OracleFunction, Partition, RangeFunction, Side, Stage, StageOracle};

/// A functional whose lower and upper extensions are approximated by a
/// monotone family of bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Functional {
    /// Darboux sums over the partition aligned to both functions, bisected
    /// `0..=rounds` times.
    Integral { rounds: u32 },
    /// Stage ranges of neighbourhoods of `x0` of radius `2⁻ᵏ`, `k ≤ depth`.
    Limit { x0: Rational, side: Side, depth: usize },
}

type Bounds = Vec<(Extended, Extended)>;

impl Functional {
    fn labels(&self) -> Vec<String> {
        match self {
            Functional::Integral { rounds } => (0..=*rounds).map(|r| format!("partition bisected {r} times")).collect(),
            Functional::Limit { depth, .. } => (0..=*depth).map(|k| format!("stage {k}")).collect(),
        }
    }

    fn bounds(&self, f: &OracleFunction, partitions: &[Partition]) -> Result<Bounds> {
        match self {
            Functional::Integral { .. } => Ok(partitions
                .iter()
                .map(|p| {
                    let s = darboux_sums(f, p);
                    (s.lower, s.upper)
                })
                .collect()),
            Functional::Limit { x0, side, depth } => {
                let stages = FunctionStages(f);
                (0..=*depth)
                    .map(|k| {
                        let stage = Stage::Neighbourhood {
                            center: x0.clone(),
                            radius: Rational::from_integer(1.into())
                                / Rational::from_integer(num_bigint::BigInt::from(1) << k),
                            side: *side,
                        };
                        stages.stage_range(&stage, k).map(|s| (s.range.inf, s.range.sup))
                    })
                    .collect()
            }
        }
    }
}

fn combine(terms: &[(&Rational, &Extended)]) -> Option<Extended> {
    terms
        .iter()
        .try_fold(Extended::Finite(Rational::zero()), |acc, (a, x)| acc.checked_add(&x.scale(a)))
}

/// Best bounds: the largest lower and the smallest upper value.
fn best(b: &Bounds) -> (Extended, Extended) {
    let lo = b.iter().map(|x| x.0.clone()).max().unwrap_or(Extended::NegInf);
    let hi = b.iter().map(|x| x.1.clone()).min().unwrap_or(Extended::PosInf);
    (lo, hi)
}

fn expect_le(c: &mut CheckBuilder<'_>, element: &str, lhs: &Extended, rhs: Option<Extended>) {
    match rhs {
        Some(r) => c.expect(lhs <= &r, element, lhs.to_string(), r.to_string()),
        None => c.expect(false, element, lhs.to_string(), "undefined"),
    }
}

/// Checks, for `g = a1·f1 + a2·f2` with `a1, a2 ≥ 0` and at every bound of
/// the family as well as for the best bounds:
/// `uex(g) ≤ a1·uex(f1) + a2·uex(f2)`, `a1·lex(f1) + a2·lex(f2) ≤ lex(g)`,
/// `-lex(f) = uex(-f)` for `f ∈ {f1, f2, g}`, and, when `f1` and `f2` are
/// both pinned down exactly, `ex(g) = a1·ex(f1) + a2·ex(f2)`.
pub fn linearity_audit(
    functional: &Functional,
    f1: &OracleFunction,
    f2: &OracleFunction,
    a1: &Rational,
    a2: &Rational,
) -> Result<AuditReport> {
    if a1.is_negative() || a2.is_negative() {
        return Err(Error::HypothesisViolated("scalars must be non-negative".into()));
    }
    if f1.domain() != f2.domain() {
        return Err(Error::Mismatch("functions live on different intervals".into()));
    }
    let g = f1.combine(a1, f2, a2)?;
    let partitions: Vec<Partition> = match functional {
        Functional::Integral { rounds } => {
            let start = Partition::aligned(f1).common_refinement(&Partition::aligned(f2))?;
            (0..=*rounds)
                .scan(start, |p, _| {
                    let cur = p.clone();
                    *p = p.bisect();
                    Some(cur)
                })
                .collect()
        }
        Functional::Limit { .. } => Vec::new(),
    };
    let b1 = functional.bounds(f1, &partitions)?;
    let b2 = functional.bounds(f2, &partitions)?;
    let bg = functional.bounds(&g, &partitions)?;
    let mut labels = functional.labels();
    labels.push("best bounds".into());
    let with_best = |b: &Bounds| {
        let mut v = b.clone();
        v.push(best(b));
        v
    };
    let (b1, b2, bg) = (with_best(&b1), with_best(&b2), with_best(&bg));

    let mut report = AuditReport::new("linearity");
    let mut c = report.check("upper_subadditive");
    for (i, label) in labels.iter().enumerate() {
        expect_le(&mut c, label, &bg[i].1, combine(&[(a1, &b1[i].1), (a2, &b2[i].1)]));
    }
    let mut c = report.check("lower_superadditive");
    for (i, label) in labels.iter().enumerate() {
        match combine(&[(a1, &b1[i].0), (a2, &b2[i].0)]) {
            Some(l) => c.expect(l <= bg[i].0, label.as_str(), l.to_string(), bg[i].0.to_string()),
            None => c.expect(false, label.as_str(), "undefined", bg[i].0.to_string()),
        }
    }

    let mut c = report.check("negation_duality");
    for (name, f, bounds) in [("f1", f1, &b1), ("f2", f2, &b2), ("g", &g, &bg)] {
        let neg = with_best(&functional.bounds(&f.neg(), &partitions)?);
        for (i, label) in labels.iter().enumerate() {
            let lhs = -bounds[i].0.clone();
            let rhs = neg[i].1.clone();
            c.expect(lhs == rhs, format!("{name}, {label}"), lhs.to_string(), rhs.to_string());
        }
    }

    let mut c = report.check("additive_on_darboux_members");
    let exact = |b: &(Extended, Extended)| (b.0 == b.1 && b.0.is_finite()).then(|| b.0.clone());
    let last = labels.len() - 1;
    if let (Some(e1), Some(e2)) = (exact(&b1[last]), exact(&b2[last])) {
        let expected = combine(&[(a1, &e1), (a2, &e2)]);
        let ok = exact(&bg[last]).is_some() && expected.as_ref() == exact(&bg[last]).as_ref();
        c.expect(
            ok,
            format!("{}·ex(f1) + {}·ex(f2)", format_rational(a1), format_rational(a2)),
            format!("[{}, {}]", bg[last].0, bg[last].1),
            expected.map_or("undefined".into(), |e| e.to_string()),
        );
    }
    Ok(report)
}
