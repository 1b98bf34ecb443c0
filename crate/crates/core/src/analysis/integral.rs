//! Darboux sums over partitions and the refinement integrator.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Extended, Rational};

use super::{RangeFunction, Span, StepFunction};

/// A finite increasing list of breakpoints; its pieces are the open
/// intervals between consecutive breakpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    #[serde(with = "crate::rational::serde_rational_vec")]
    breaks: Vec<Rational>,
}

impl Partition {
    pub fn new(breaks: Vec<Rational>) -> Result<Self> {
        if breaks.len() < 2 || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("breakpoints must be strictly increasing, at least two".into()));
        }
        Ok(Partition { breaks })
    }

    /// `n` pieces of equal length.
    pub fn uniform(a: &Rational, b: &Rational, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("a partition needs at least one piece".into()));
        }
        let step = (b - a) / Rational::from_integer(n.into());
        Self::new((0..=n).map(|i| a + &step * Rational::from_integer(i.into())).collect())
    }

    /// The domain ends together with the function's breakpoints.
    pub fn aligned(f: &dyn RangeFunction) -> Self {
        let (a, b) = f.domain();
        let mut breaks: Vec<Rational> = f.breakpoints().into_iter().filter(|x| &a < x && x < &b).collect();
        breaks.push(a);
        breaks.push(b);
        breaks.sort();
        breaks.dedup();
        Partition { breaks }
    }

    /// The aligned partition bisected `rounds` times.
    pub fn aligned_bisected(f: &dyn RangeFunction, rounds: u32) -> Self {
        (0..rounds).fold(Self::aligned(f), |p, _| p.bisect())
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn len(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pieces(&self) -> impl Iterator<Item = Span> + '_ {
        self.breaks.windows(2).map(|w| Span::open(w[0].clone(), w[1].clone()))
    }

    /// Every piece cut at its midpoint.
    pub fn bisect(&self) -> Self {
        let mut breaks = Vec::with_capacity(2 * self.breaks.len());
        for w in self.breaks.windows(2) {
            breaks.push(w[0].clone());
            breaks.push((&w[0] + &w[1]) / int(2));
        }
        breaks.push(self.breaks.last().unwrap().clone());
        Partition { breaks }
    }

    /// True when every breakpoint of `coarser` is one of ours.
    pub fn refines(&self, coarser: &Partition) -> bool {
        coarser.breaks.first() == self.breaks.first()
            && coarser.breaks.last() == self.breaks.last()
            && coarser.breaks.iter().all(|x| self.breaks.binary_search(x).is_ok())
    }

    pub fn common_refinement(&self, other: &Partition) -> Result<Partition> {
        if self.breaks.first() != other.breaks.first() || self.breaks.last() != other.breaks.last() {
            return Err(Error::Mismatch("partitions cover different intervals".into()));
        }
        let mut breaks: Vec<Rational> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        breaks.sort();
        breaks.dedup();
        Ok(Partition { breaks })
    }
}

/// `Σ (length × value)` over the pieces.
pub fn step_integral(s: &StepFunction) -> Rational {
    s.breaks()
        .windows(2)
        .zip(s.values())
        .map(|(w, v)| (&w[1] - &w[0]) * v)
        .sum()
}

/// Lower and upper Darboux sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DarbouxSums {
    pub lower: Extended,
    pub upper: Extended,
}

fn weighted(m: &Rational, x: &Extended) -> Extended {
    x.scale(m)
}

fn add_or(acc: Extended, x: &Extended, on_clash: Extended) -> Extended {
    acc.checked_add(x).unwrap_or(on_clash)
}

/// `L_P = Σ m(I)·inf_I f` and `U_P = Σ m(I)·sup_I f` over the open pieces
/// of a partition of the domain.
pub fn darboux_sums(f: &dyn RangeFunction, p: &Partition) -> DarbouxSums {
    let mut lower = Extended::Finite(Rational::zero());
    let mut upper = Extended::Finite(Rational::zero());
    for piece in p.pieces() {
        let m = piece.length();
        let r = f.range_on(&piece);
        lower = add_or(lower, &weighted(&m, &r.inf), Extended::NegInf);
        upper = add_or(upper, &weighted(&m, &r.sup), Extended::PosInf);
    }
    DarbouxSums { lower, upper }
}

/// Lower bound on `U_P - L_P` valid for `p` and all its refinements.
fn gap_certificate(f: &dyn RangeFunction, p: &Partition) -> Rational {
    p.pieces()
        .filter_map(|s| f.oscillation_floor(&s).map(|g| g * s.length()))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Cut every piece in half each round.
    #[default]
    Uniform,
    /// Cut the piece with the largest `m(I)·(sup - inf)`, leftmost on ties.
    Adaptive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrateOptions {
    pub eps: Rational,
    /// Uniform: rounds of bisection. Adaptive: the piece count may grow to
    /// `2^max_refine` times the initial count.
    pub max_refine: u32,
    pub strategy: Strategy,
}

impl IntegrateOptions {
    pub fn new(eps: Rational) -> Self {
        IntegrateOptions {
            eps,
            max_refine: 21,
            strategy: Strategy::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum IntegrationVerdict {
    /// The integral lies within `radius ≤ eps` of `value`.
    Integrable {
        #[serde(with = "crate::rational::serde_rational")]
        value: Rational,
        #[serde(with = "crate::rational::serde_rational")]
        radius: Rational,
    },
    /// Every refinement keeps `U_P - L_P ≥ gap`.
    GapCertified {
        #[serde(with = "crate::rational::serde_rational")]
        gap: Rational,
    },
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrationResult {
    /// Best lower sum seen.
    pub lower: Extended,
    /// Best upper sum seen.
    pub upper: Extended,
    /// Pieces of the last partition examined.
    pub pieces: usize,
    #[serde(flatten)]
    pub verdict: IntegrationVerdict,
}

/// Refines partitions starting from the one aligned to the breakpoints of
/// `f`, keeping the best lower and upper sums, until they are within
/// `2·eps`, a gap is certified, or the refinement budget runs out.
pub fn integrate(f: &dyn RangeFunction, opts: &IntegrateOptions) -> Result<IntegrationResult> {
    if !opts.eps.is_positive() {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    match opts.strategy {
        Strategy::Uniform => integrate_uniform(f, opts),
        Strategy::Adaptive => integrate_adaptive(f, opts),
    }
}

fn settle(lower: &Extended, upper: &Extended, eps: &Rational) -> Option<IntegrationVerdict> {
    let (Extended::Finite(l), Extended::Finite(u)) = (lower, upper) else {
        return None;
    };
    let width = u - l;
    (width <= eps * int(2)).then(|| IntegrationVerdict::Integrable {
        value: (l + u) / int(2),
        radius: width / int(2),
    })
}

fn integrate_uniform(f: &dyn RangeFunction, opts: &IntegrateOptions) -> Result<IntegrationResult> {
    let mut p = Partition::aligned(f);
    let mut lower = Extended::NegInf;
    let mut upper = Extended::PosInf;
    for round in 0..=opts.max_refine {
        let sums = darboux_sums(f, &p);
        lower = lower.max(sums.lower);
        upper = upper.min(sums.upper);
        let result = |verdict| IntegrationResult {
            lower: lower.clone(),
            upper: upper.clone(),
            pieces: p.len(),
            verdict,
        };
        let cert = gap_certificate(f, &p);
        if cert.is_positive() {
            return Ok(result(IntegrationVerdict::GapCertified { gap: cert }));
        }
        if let Some(v) = settle(&lower, &upper, &opts.eps) {
            return Ok(result(v));
        }
        if round < opts.max_refine {
            p = p.bisect();
        }
    }
    Ok(IntegrationResult {
        lower,
        upper,
        pieces: p.len(),
        verdict: IntegrationVerdict::Undetermined,
    })
}

/// Running sum of extended values that tolerates removal.
struct Tally {
    finite: Rational,
    infinite: usize,
}

impl Tally {
    fn push(&mut self, x: &Extended, sign: i64) {
        match x {
            Extended::Finite(q) => self.finite += q * int(sign),
            _ if sign > 0 => self.infinite += 1,
            _ => self.infinite -= 1,
        }
    }

    fn value(&self, infinity: Extended) -> Extended {
        if self.infinite > 0 {
            infinity
        } else {
            Extended::Finite(self.finite.clone())
        }
    }
}

struct Piece {
    span: Span,
    lower: Extended,
    upper: Extended,
    floor: Rational,
}

fn measure(f: &dyn RangeFunction, span: Span) -> Piece {
    let m = span.length();
    let r = f.range_on(&span);
    let floor = f.oscillation_floor(&span).map(|g| g * &m).unwrap_or_else(Rational::zero);
    Piece {
        lower: weighted(&m, &r.inf),
        upper: weighted(&m, &r.sup),
        span,
        floor,
    }
}

fn spread(p: &Piece) -> Extended {
    match (&p.lower, &p.upper) {
        (Extended::Finite(l), Extended::Finite(u)) => Extended::Finite(u - l),
        _ => Extended::PosInf,
    }
}

fn integrate_adaptive(f: &dyn RangeFunction, opts: &IntegrateOptions) -> Result<IntegrationResult> {
    let start = Partition::aligned(f);
    let limit = start.len().saturating_mul(1usize << opts.max_refine.min(40));
    let mut pieces: Vec<Piece> = start.pieces().map(|s| measure(f, s)).collect();
    let mut lo_sum = Tally::default();
    let mut hi_sum = Tally::default();
    let mut cert = Rational::zero();
    for p in &pieces {
        lo_sum.push(&p.lower, 1);
        hi_sum.push(&p.upper, 1);
        cert += &p.floor;
    }
    // Largest spread first, then leftmost.
    let mut heap: BinaryHeap<(Extended, Reverse<Rational>, usize)> = pieces
        .iter()
        .enumerate()
        .map(|(i, p)| (spread(p), Reverse(p.span.lo.clone()), i))
        .collect();
    let mut lower = Extended::NegInf;
    let mut upper = Extended::PosInf;
    let mut live = pieces.len();
    loop {
        lower = lower.max(lo_sum.value(Extended::NegInf));
        upper = upper.min(hi_sum.value(Extended::PosInf));
        let result = |verdict| IntegrationResult {
            lower: lower.clone(),
            upper: upper.clone(),
            pieces: live,
            verdict,
        };
        if cert.is_positive() {
            return Ok(result(IntegrationVerdict::GapCertified { gap: cert }));
        }
        if let Some(v) = settle(&lower, &upper, &opts.eps) {
            return Ok(result(v));
        }
        if live >= limit {
            return Ok(result(IntegrationVerdict::Undetermined));
        }
        let Some((_, _, i)) = heap.pop() else {
            return Ok(result(IntegrationVerdict::Undetermined));
        };
        let old = &pieces[i];
        lo_sum.push(&old.lower, -1);
        hi_sum.push(&old.upper, -1);
        cert -= &old.floor;
        let mid = (&old.span.lo + &old.span.hi) / int(2);
        let halves = [
            Span::open(old.span.lo.clone(), mid.clone()),
            Span::open(mid, old.span.hi.clone()),
        ];
        for (k, span) in halves.into_iter().enumerate() {
            let p = measure(f, span);
            lo_sum.push(&p.lower, 1);
            hi_sum.push(&p.upper, 1);
            cert += &p.floor;
            let key = (spread(&p), Reverse(p.span.lo.clone()));
            let idx = if k == 0 {
                pieces[i] = p;
                i
            } else {
                pieces.push(p);
                pieces.len() - 1
            };
            heap.push((key.0, key.1, idx));
        }
        live += 1;
    }
}

impl Default for Tally {
    fn default() -> Self {
        Tally {
            finite: Rational::zero(),
            infinite: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::OracleFunction;
    use crate::rational::rat;

    fn fin(q: Rational) -> Extended {
        Extended::Finite(q)
    }

    #[test]
    fn step_integrals() {
        let one = StepFunction::new(vec![int(0), int(1)], vec![int(1)]).unwrap();
        assert_eq!(step_integral(&one), int(1));
        let s = StepFunction::new(vec![int(0), rat(1, 2), int(1)], vec![int(2), int(0)]).unwrap();
        assert_eq!(step_integral(&s), int(1));
        let finer = StepFunction::new(vec![int(0), rat(1, 4), rat(1, 2), int(1)], vec![int(2), int(2), int(0)]).unwrap();
        assert_eq!(step_integral(&finer), step_integral(&s));
    }

    #[test]
    fn identity_sums_closed_form() {
        let f = OracleFunction::identity(int(0), int(1)).unwrap();
        for n in 1..=12usize {
            let p = Partition::uniform(&int(0), &int(1), n).unwrap();
            let s = darboux_sums(&f, &p);
            let n_q = Rational::from_integer(n.into());
            assert_eq!(s.lower, fin((&n_q - int(1)) / (int(2) * &n_q)));
            assert_eq!(s.upper, fin((&n_q + int(1)) / (int(2) * &n_q)));
        }
    }

    #[test]
    fn constant_and_dirichlet_sums() {
        let c = OracleFunction::constant(int(0), int(2), rat(3, 2)).unwrap();
        let d = OracleFunction::dirichlet(int(0), int(1)).unwrap();
        for n in [1usize, 3, 8] {
            let s = darboux_sums(&c, &Partition::uniform(&int(0), &int(2), n).unwrap());
            assert_eq!((s.lower, s.upper), (fin(int(3)), fin(int(3))));
            let s = darboux_sums(&d, &Partition::uniform(&int(0), &int(1), n).unwrap());
            assert_eq!((s.lower, s.upper), (fin(int(0)), fin(int(1))));
        }
    }

    #[test]
    fn step_integrates_exactly_on_first_partition() {
        let s = StepFunction::new(vec![int(0), rat(1, 3), rat(5, 7), int(1)], vec![int(2), int(-1), rat(1, 2)]).unwrap();
        let f = OracleFunction::step(s.clone()).unwrap();
        let r = integrate(&f, &IntegrateOptions::new(rat(1, 1_000_000))).unwrap();
        assert_eq!(
            r.verdict,
            IntegrationVerdict::Integrable {
                value: step_integral(&s),
                radius: int(0)
            }
        );
        assert_eq!(r.pieces, 3);
    }

    #[test]
    fn dirichlet_gap_certified() {
        let d = OracleFunction::dirichlet(int(0), int(1)).unwrap();
        for strategy in [Strategy::Uniform, Strategy::Adaptive] {
            let opts = IntegrateOptions {
                strategy,
                ..IntegrateOptions::new(rat(1, 1000))
            };
            let r = integrate(&d, &opts).unwrap();
            assert_eq!(r.verdict, IntegrationVerdict::GapCertified { gap: int(1) });
            assert_eq!((r.lower, r.upper), (fin(int(0)), fin(int(1))));
        }
    }

    #[test]
    fn adaptive_identity() {
        let f = OracleFunction::identity(int(0), int(1)).unwrap();
        let opts = IntegrateOptions {
            strategy: Strategy::Adaptive,
            ..IntegrateOptions::new(rat(1, 1000))
        };
        let r = integrate(&f, &opts).unwrap();
        let IntegrationVerdict::Integrable { value, radius } = r.verdict else {
            panic!("{r:?}")
        };
        assert!(radius <= rat(1, 1000));
        assert!((value - rat(1, 2)).abs() <= radius);
    }

    #[test]
    fn budget_exhaustion_is_undetermined() {
        let f = OracleFunction::identity(int(0), int(1)).unwrap();
        let opts = IntegrateOptions {
            max_refine: 3,
            ..IntegrateOptions::new(rat(1, 1_000_000))
        };
        let r = integrate(&f, &opts).unwrap();
        assert_eq!(r.verdict, IntegrationVerdict::Undetermined);
        assert_eq!((r.lower, r.upper), (fin(rat(7, 16)), fin(rat(9, 16))));
    }

    #[test]
    fn refinement_checks() {
        let p = Partition::uniform(&int(0), &int(1), 2).unwrap();
        let q = Partition::uniform(&int(0), &int(1), 3).unwrap();
        let r = p.common_refinement(&q).unwrap();
        assert!(r.refines(&p) && r.refines(&q) && !p.refines(&q));
        assert_eq!(r.len(), 4);
        assert!(p.bisect().refines(&p));
    }
}
