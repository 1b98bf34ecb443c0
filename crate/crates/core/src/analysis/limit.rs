//! Filter limits over descending chains of stages.
//!
//! A function converges along the filter exactly when the supremum of its
//! stage infima meets the infimum of its stage suprema. Running the chain
//! to a finite depth gives an enclosure `[max Lₖ, min Uₖ]`; divergence is
//! only reported when the oracle certifies a gap that no later stage can
//! close.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Extended, Rational};

use super::{ExtRange, RangeFunction, Side, Span};

/// A descending chain `k ↦ 𝒮ₖ` of stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterBasis {
    /// `𝒮ₖ = {n ∈ ℕ : n > k}`.
    Tails,
    /// `𝒮ₖ` is the neighbourhood of `center` of radius `radius / 2ᵏ`.
    Neighbourhood {
        center: Rational,
        radius: Rational,
        side: Side,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stage {
    Tail(u64),
    Neighbourhood {
        center: Rational,
        radius: Rational,
        side: Side,
    },
}

impl FilterBasis {
    pub fn stage(&self, k: usize) -> Stage {
        match self {
            FilterBasis::Tails => Stage::Tail(k as u64),
            FilterBasis::Neighbourhood { center, radius, side } => Stage::Neighbourhood {
                center: center.clone(),
                radius: radius / Rational::from_integer(num_bigint::BigInt::one() << k),
                side: *side,
            },
        }
    }
}

/// Range of a function over one stage, with an optional certified lower
/// bound on `sup - inf` valid for this stage and every later one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRange {
    pub range: ExtRange,
    pub gap: Option<Rational>,
}

pub trait StageOracle {
    fn stage_range(&self, stage: &Stage, k: usize) -> Result<StageRange>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum LimitVerdict {
    Converged {
        limit: Extended,
    },
    DivergentGap {
        #[serde(with = "crate::rational::serde_rational")]
        gap: Rational,
    },
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitResult {
    pub lower: Extended,
    pub upper: Extended,
    /// Number of stages inspected.
    pub stages: usize,
    #[serde(flatten)]
    pub verdict: LimitVerdict,
}

/// The rational with the smallest denominator (then the smallest absolute
/// numerator) in `[lo, hi]`.
pub fn simplest_rational(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_positive(&-hi, &-lo);
    }
    simplest_positive(lo, hi)
}

fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let n = lo.floor();
    let inner = simplest_positive(&(Rational::one() / (hi - &n)), &(Rational::one() / (lo - &n)));
    n + Rational::one() / inner
}

/// Runs the filter chain for stages `0..=depth`.
///
/// Converged when the enclosure is finite with width at most `eps` (the
/// reported limit is the simplest rational in the enclosure, which lies
/// within `eps` of the true limit) or when the stage infima reach `1/eps`
/// with unbounded suprema (`+inf`, and dually `-inf`); DivergentGap as soon
/// as a stage carries a positive gap certificate; Undetermined otherwise.
pub fn filter_limit(oracle: &dyn StageOracle, basis: &FilterBasis, eps: &Rational, depth: usize) -> Result<LimitResult> {
    if !eps.is_positive() {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let big = Extended::Finite(Rational::one() / eps);
    let mut lower = Extended::NegInf;
    let mut upper = Extended::PosInf;
    for k in 0..=depth {
        let sr = oracle.stage_range(&basis.stage(k), k)?;
        lower = lower.max(sr.range.inf);
        upper = upper.min(sr.range.sup);
        let done = |verdict| {
            Ok(LimitResult {
                lower: lower.clone(),
                upper: upper.clone(),
                stages: k + 1,
                verdict,
            })
        };
        if let Some(g) = sr.gap.filter(|g| g.is_positive()) {
            return done(LimitVerdict::DivergentGap { gap: g });
        }
        match (&lower, &upper) {
            (Extended::Finite(l), Extended::Finite(u)) if &(u - l) <= eps => {
                return done(LimitVerdict::Converged {
                    limit: Extended::Finite(simplest_rational(l, u)),
                });
            }
            (l, Extended::PosInf) if *l >= big => {
                return done(LimitVerdict::Converged { limit: Extended::PosInf });
            }
            (Extended::NegInf, u) if *u <= -big.clone() => {
                return done(LimitVerdict::Converged { limit: Extended::NegInf });
            }
            _ => {}
        }
    }
    Ok(LimitResult {
        lower,
        upper,
        stages: depth + 1,
        verdict: LimitVerdict::Undetermined,
    })
}

/// Builtin sequences `f : ℕ → ℚ`, indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "sequence", rename_all = "kebab-case")]
pub enum Sequence {
    Constant {
        #[serde(with = "crate::rational::serde_rational")]
        value: Rational,
    },
    /// `prefix` for `n = 1..=len`, then `tail` forever.
    EventuallyConstant {
        #[serde(with = "crate::rational::serde_rational_vec")]
        prefix: Vec<Rational>,
        #[serde(with = "crate::rational::serde_rational")]
        tail: Rational,
    },
    /// `1/n`.
    Reciprocal,
    /// `(n+1)/n`.
    SuccessorRatio,
    /// `(-1)ⁿ`.
    Alternating,
    /// `n`.
    Natural,
}

impl Sequence {
    pub fn term(&self, n: u64) -> Rational {
        assert!(n >= 1, "sequences are indexed from 1");
        let n_q = Rational::from_integer(n.into());
        match self {
            Sequence::Constant { value } => value.clone(),
            Sequence::EventuallyConstant { prefix, tail } => {
                prefix.get(n as usize - 1).cloned().unwrap_or_else(|| tail.clone())
            }
            Sequence::Reciprocal => Rational::one() / n_q,
            Sequence::SuccessorRatio => (&n_q + Rational::one()) / n_q,
            Sequence::Alternating => int(if n.is_even() { 1 } else { -1 }),
            Sequence::Natural => n_q,
        }
    }

    /// Range over `{n : n > k}`.
    pub fn tail_range(&self, k: u64) -> ExtRange {
        let next = Rational::from_integer((k + 1).into());
        match self {
            Sequence::Constant { value } => ExtRange::point(value.clone()),
            Sequence::EventuallyConstant { prefix, tail } => prefix
                .iter()
                .skip(k as usize)
                .fold(ExtRange::point(tail.clone()), |r, v| r.hull(&ExtRange::point(v.clone()))),
            Sequence::Reciprocal => ExtRange::finite(Rational::zero(), Rational::one() / next),
            Sequence::SuccessorRatio => ExtRange::finite(Rational::one(), (&next + Rational::one()) / next),
            Sequence::Alternating => ExtRange::finite(int(-1), int(1)),
            Sequence::Natural => ExtRange::new(Extended::Finite(next), Extended::PosInf),
        }
    }

    /// Every tail takes both values of `(-1)ⁿ`.
    pub fn tail_gap(&self) -> Option<Rational> {
        matches!(self, Sequence::Alternating).then(|| int(2))
    }
}

impl StageOracle for Sequence {
    fn stage_range(&self, stage: &Stage, k: usize) -> Result<StageRange> {
        match stage {
            Stage::Tail(n) => Ok(StageRange {
                range: self.tail_range(*n),
                gap: self.tail_gap(),
            }),
            Stage::Neighbourhood { .. } => Err(Error::StageUnavailable(k)),
        }
    }
}

/// Limit of a sequence along the tail filter.
pub fn sequence_limit(seq: &Sequence, eps: &Rational, depth: usize) -> Result<LimitResult> {
    filter_limit(seq, &FilterBasis::Tails, eps, depth)
}

/// Neighbourhood stages of a range function, clipped to its domain.
#[derive(Debug, Clone, Copy)]
pub struct FunctionStages<'a>(pub &'a dyn RangeFunction);

impl FunctionStages<'_> {
    fn spans(&self, center: &Rational, radius: &Rational, side: Side) -> Vec<Span> {
        let (a, b) = self.0.domain();
        let lo = (center - radius).max(a);
        let hi = (center + radius).min(b);
        let left = (&lo < center).then(|| Span {
            lo: lo.clone(),
            hi: center.clone(),
            lo_closed: side != Side::Left,
            hi_closed: false,
        });
        let right = (center < &hi).then(|| Span {
            lo: center.clone(),
            hi: hi.clone(),
            lo_closed: false,
            hi_closed: side != Side::Right,
        });
        match side {
            Side::Closed => vec![Span::closed(lo, hi)],
            Side::Punctured => left.into_iter().chain(right).collect(),
            Side::Left => left.into_iter().collect(),
            Side::Right => right.into_iter().collect(),
        }
    }
}

impl StageOracle for FunctionStages<'_> {
    fn stage_range(&self, stage: &Stage, k: usize) -> Result<StageRange> {
        let Stage::Neighbourhood { center, radius, side } = stage else {
            return Err(Error::StageUnavailable(k));
        };
        let spans = self.spans(center, radius, *side);
        let Some((first, rest)) = spans.split_first() else {
            return Err(Error::OutsideDomain(format!(
                "the {side:?} neighbourhood of {}",
                format_rational(center)
            )));
        };
        let range = rest
            .iter()
            .fold(self.0.range_on(first), |r, s| r.hull(&self.0.range_on(s)));
        let gap = spans
            .iter()
            .filter_map(|s| self.0.oscillation_floor(s))
            .chain(self.0.jump_at(center, *side))
            .max();
        Ok(StageRange { range, gap })
    }
}

fn require_inside(f: &dyn RangeFunction, x0: &Rational, side: Side) -> Result<()> {
    let (a, b) = f.domain();
    let ok = match side {
        Side::Closed | Side::Punctured => &a < x0 && x0 < &b,
        Side::Left => &a < x0 && x0 <= &b,
        Side::Right => &a <= x0 && x0 < &b,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutsideDomain(format!("{} for this kind of neighbourhood", format_rational(x0))))
    }
}

fn neighbourhood_limit(
    f: &dyn RangeFunction,
    x0: &Rational,
    side: Side,
    eps: &Rational,
    depth: usize,
) -> Result<LimitResult> {
    require_inside(f, x0, side)?;
    let basis = FilterBasis::Neighbourhood {
        center: x0.clone(),
        radius: Rational::one(),
        side,
    };
    filter_limit(&FunctionStages(f), &basis, eps, depth)
}

/// Limit over the closed neighbourhoods `[x0 - δₖ, x0 + δₖ]`, `δₖ = 2⁻ᵏ`.
/// A converged limit must agree with the point value when one is offered.
pub fn continuity_check(f: &dyn RangeFunction, x0: &Rational, eps: &Rational, depth: usize) -> Result<LimitResult> {
    let result = neighbourhood_limit(f, x0, Side::Closed, eps, depth)?;
    if let (LimitVerdict::Converged { .. }, Some(v)) = (&result.verdict, f.value_at(x0)) {
        let v = Extended::Finite(v);
        if v < result.lower || v > result.upper {
            return Err(Error::OracleInconsistent(format!(
                "value {v} at {} outside the stage ranges",
                format_rational(x0)
            )));
        }
    }
    Ok(result)
}

/// Limit over punctured or one-sided neighbourhoods of `x0`.
pub fn punctured_limit(
    f: &dyn RangeFunction,
    x0: &Rational,
    side: Side,
    eps: &Rational,
    depth: usize,
) -> Result<LimitResult> {
    if side == Side::Closed {
        return continuity_check(f, x0, eps, depth);
    }
    neighbourhood_limit(f, x0, side, eps, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{OracleFunction, StepFunction};
    use crate::rational::rat;

    fn eps() -> Rational {
        rat(1, 1000)
    }

    fn converged(r: &LimitResult) -> Option<Extended> {
        match &r.verdict {
            LimitVerdict::Converged { limit } => Some(limit.clone()),
            _ => None,
        }
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_rational(&rat(-1, 3), &rat(1, 5)), int(0));
        assert_eq!(simplest_rational(&rat(1, 3), &rat(1, 2)), rat(1, 2));
        assert_eq!(simplest_rational(&rat(3, 10), &rat(2, 5)), rat(1, 3));
        assert_eq!(simplest_rational(&rat(-2, 5), &rat(-3, 10)), rat(-1, 3));
        assert_eq!(simplest_rational(&rat(7, 3), &rat(7, 3)), rat(7, 3));
        assert_eq!(simplest_rational(&rat(1, 1), &rat(1001, 1000)), int(1));
    }

    #[test]
    fn eventually_constant_sequence() {
        let seq = Sequence::EventuallyConstant {
            prefix: vec![int(9), int(-4), int(7)],
            tail: int(5),
        };
        let r = sequence_limit(&seq, &eps(), 10).unwrap();
        assert_eq!(converged(&r), Some(Extended::Finite(int(5))));
        assert_eq!(r.stages, 4);
        assert_eq!(r.lower, r.upper);
    }

    #[test]
    fn reciprocal_converges_to_zero() {
        let r = sequence_limit(&Sequence::Reciprocal, &eps(), 1000).unwrap();
        assert_eq!(converged(&r), Some(Extended::Finite(int(0))));
        assert_eq!(r.lower, Extended::Finite(int(0)));
        assert_eq!(r.upper, Extended::Finite(rat(1, 1000)));
        let shallow = sequence_limit(&Sequence::Reciprocal, &eps(), 10).unwrap();
        assert_eq!(shallow.verdict, LimitVerdict::Undetermined);
        assert_eq!(shallow.upper, Extended::Finite(rat(1, 11)));
    }

    #[test]
    fn other_sequences() {
        let r = sequence_limit(&Sequence::Alternating, &eps(), 50).unwrap();
        assert_eq!(r.verdict, LimitVerdict::DivergentGap { gap: int(2) });
        let r = sequence_limit(&Sequence::SuccessorRatio, &eps(), 2000).unwrap();
        assert_eq!(converged(&r), Some(Extended::Finite(int(1))));
        let r = sequence_limit(&Sequence::Natural, &eps(), 2000).unwrap();
        assert_eq!(converged(&r), Some(Extended::PosInf));
        let r = sequence_limit(&Sequence::Constant { value: int(5) }, &eps(), 0).unwrap();
        assert_eq!(converged(&r), Some(Extended::Finite(int(5))));
    }

    #[test]
    fn continuity_of_identity_and_step() {
        let id = OracleFunction::identity(int(-1), int(1)).unwrap();
        let r = continuity_check(&id, &int(0), &eps(), 20).unwrap();
        assert_eq!(converged(&r), Some(Extended::Finite(int(0))));
        let step = OracleFunction::step(StepFunction::new(vec![int(-1), int(0), int(1)], vec![int(0), int(1)]).unwrap())
            .unwrap();
        let r = continuity_check(&step, &int(0), &eps(), 20).unwrap();
        assert_eq!(r.verdict, LimitVerdict::DivergentGap { gap: int(1) });
        assert_eq!(
            continuity_check(&id, &int(1), &eps(), 5).unwrap_err().code(),
            "OutsideDomain"
        );
    }

    #[test]
    fn sign_function_limits() {
        let s = StepFunction::with_break_values(vec![int(-1), int(0), int(1)], vec![int(-1), int(1)], vec![int(-1), int(0), int(1)])
            .unwrap();
        let sign = OracleFunction::step(s).unwrap();
        let right = punctured_limit(&sign, &int(0), Side::Right, &eps(), 20).unwrap();
        assert_eq!(converged(&right), Some(Extended::Finite(int(1))));
        let left = punctured_limit(&sign, &int(0), Side::Left, &eps(), 20).unwrap();
        assert_eq!(converged(&left), Some(Extended::Finite(int(-1))));
        let both = punctured_limit(&sign, &int(0), Side::Punctured, &eps(), 20).unwrap();
        assert_eq!(both.verdict, LimitVerdict::DivergentGap { gap: int(2) });
    }

    #[test]
    fn square_near_one() {
        let sq = OracleFunction::square(int(0), int(2)).unwrap();
        let r = punctured_limit(&sq, &int(1), Side::Punctured, &eps(), 30).unwrap();
        assert_eq!(converged(&r), Some(Extended::Finite(int(1))));
    }

    #[test]
    fn stage_kinds_must_match() {
        let id = OracleFunction::identity(int(0), int(1)).unwrap();
        let err = filter_limit(&FunctionStages(&id), &FilterBasis::Tails, &eps(), 3).unwrap_err();
        assert_eq!(err, Error::StageUnavailable(0));
    }

    #[test]
    fn verdict_serialization() {
        let r = sequence_limit(&Sequence::Alternating, &eps(), 3).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"lower":"-1/1","upper":"1/1","stages":1,"verdict":"DivergentGap","gap":"2/1"}"#);
        let back: LimitResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
