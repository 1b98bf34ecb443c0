//! Real numbers as rational cuts.
//!
//! A real is described by a locate oracle, which tells on which side of it
//! a rational query lies, together with a rational bracket. Refinement is
//! plain bisection against the oracle and yields exact rational enclosures.
//! Sums, scalings and products are expression nodes whose enclosures are
//! computed from enclosures of their operands; for a sum the lower end is
//! the supremum of `r + s` over rationals `r ≤ x`, `s ≤ y` seen so far, and
//! the upper end the matching infimum. Rationals stay exact throughout.

mod audit;
mod expr;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{exact_sqrt, format_rational, int, Rational};

pub use audit::{audit_semifield, audit_translation_group};
pub use expr::parse_expression;

/// Where a rational query sits relative to the real being described.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Location {
    /// The query is strictly less than the real.
    Below,
    Equal,
    /// The query is strictly greater than the real.
    Above,
}

/// A pure decision procedure for a single real number.
///
/// `locate` must be monotone in the query and answer `Equal` for at most one
/// rational; `bracket` returns `(lo, hi)` with `lo` not above and `hi` not
/// below the real.
pub trait LocateOracle: Send + Sync + fmt::Debug {
    fn locate(&self, q: &Rational) -> Location;
    fn bracket(&self) -> (Rational, Rational);
}

/// `sqrt(q)` for a positive rational that is not a perfect square.
#[derive(Debug, Clone)]
struct SqrtOracle {
    radicand: Rational,
}

impl LocateOracle for SqrtOracle {
    fn locate(&self, q: &Rational) -> Location {
        if !q.is_positive() {
            return Location::Below;
        }
        match (q * q).cmp(&self.radicand) {
            Ordering::Less => Location::Below,
            Ordering::Equal => Location::Equal,
            Ordering::Greater => Location::Above,
        }
    }

    fn bracket(&self) -> (Rational, Rational) {
        (Rational::zero(), self.radicand.clone().max(Rational::one()))
    }
}

/// A certified rational interval `[lo, hi]` around a real.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "crate::rational::serde_rational")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub hi: Rational,
}

impl Enclosure {
    pub fn point(q: Rational) -> Self {
        Enclosure { lo: q.clone(), hi: q }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `self ⊆ outer`.
    pub fn is_within(&self, outer: &Enclosure) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

/// Bound on bisection depth for every refining operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutBudget {
    pub max_depth: u32,
}

impl Default for CutBudget {
    fn default() -> Self {
        CutBudget { max_depth: 200 }
    }
}

#[derive(Debug)]
enum Node {
    Exact(Rational),
    Oracle(Arc<dyn LocateOracle>),
    Sum(RationalCut, RationalCut),
    /// Product with a nonzero rational.
    Scale(RationalCut, Rational),
    /// Product of two reals known to be positive.
    PosProduct(RationalCut, RationalCut),
    /// `+inf` when true, `-inf` when false.
    Infinite(bool),
}

/// A real number, or one of the two infinities of the extended line.
#[derive(Debug, Clone)]
pub struct RationalCut(Arc<Node>);

impl RationalCut {
    pub fn from_rational(q: Rational) -> Self {
        RationalCut(Arc::new(Node::Exact(q)))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn pos_infinity() -> Self {
        RationalCut(Arc::new(Node::Infinite(true)))
    }

    pub fn neg_infinity() -> Self {
        RationalCut(Arc::new(Node::Infinite(false)))
    }

    /// Wraps a user oracle after checking its bracket.
    pub fn from_oracle(oracle: Arc<dyn LocateOracle>) -> Result<Self> {
        let (lo, hi) = oracle.bracket();
        check_bracket(oracle.as_ref(), &lo, &hi)?;
        Ok(RationalCut(Arc::new(Node::Oracle(oracle))))
    }

    /// Square root of a positive rational; exact when it is a square.
    pub fn sqrt(q: &Rational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::NonPositive);
        }
        Ok(match exact_sqrt(q) {
            Some(r) => Self::from_rational(r),
            None => RationalCut(Arc::new(Node::Oracle(Arc::new(SqrtOracle { radicand: q.clone() })))),
        })
    }

    /// The rational value when the real is known to be rational by
    /// construction.
    pub fn as_rational(&self) -> Option<&Rational> {
        match &*self.0 {
            Node::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(&*self.0, Node::Infinite(_))
    }

    /// Enclosure of width at most `eps`.
    pub fn refine(&self, eps: &Rational, budget: CutBudget) -> Result<Enclosure> {
        if !eps.is_positive() {
            return Err(Error::Invalid("refinement tolerance must be positive".into()));
        }
        match &*self.0 {
            Node::Exact(q) => Ok(Enclosure::point(q.clone())),
            Node::Infinite(_) => Err(Error::NonFinite),
            Node::Oracle(o) => bisect(o.as_ref(), eps, budget),
            Node::Sum(a, b) => {
                let half = eps / int(2);
                let ea = a.refine(&half, budget)?;
                let eb = b.refine(&half, budget)?;
                Ok(Enclosure {
                    lo: ea.lo + eb.lo,
                    hi: ea.hi + eb.hi,
                })
            }
            Node::Scale(x, c) => {
                let e = x.refine(&(eps / c.abs()), budget)?;
                Ok(if c.is_positive() {
                    Enclosure {
                        lo: e.lo * c,
                        hi: e.hi * c,
                    }
                } else {
                    Enclosure {
                        lo: e.hi * c,
                        hi: e.lo * c,
                    }
                })
            }
            Node::PosProduct(a, b) => refine_product(a, b, eps, budget),
        }
    }

    /// Side of `q` relative to the real, by refining until `q` falls outside
    /// the enclosure or the enclosure collapses onto it.
    pub fn locate(&self, q: &Rational, budget: CutBudget) -> Result<Location> {
        match &*self.0 {
            Node::Exact(v) => return Ok(compare_location(q, v)),
            Node::Infinite(positive) => return Ok(if *positive { Location::Below } else { Location::Above }),
            Node::Oracle(o) => return Ok(o.locate(q)),
            _ => {}
        }
        let mut eps = Rational::one();
        for _ in 0..=budget.max_depth {
            let e = self.refine(&eps, budget)?;
            if q < &e.lo {
                return Ok(Location::Below);
            }
            if q > &e.hi {
                return Ok(Location::Above);
            }
            if e.is_exact() {
                return Ok(Location::Equal);
            }
            eps = e.width() / int(4);
        }
        Err(Error::BudgetExceeded(budget.max_depth))
    }

    /// Sign of the real, or `SignUndetermined` if it stays ambiguous.
    pub fn sign(&self, budget: CutBudget) -> Result<Ordering> {
        match self.locate(&Rational::zero(), budget) {
            Ok(Location::Below) => Ok(Ordering::Greater),
            Ok(Location::Equal) => Ok(Ordering::Equal),
            Ok(Location::Above) => Ok(Ordering::Less),
            Err(Error::BudgetExceeded(d)) => Err(Error::SignUndetermined(d)),
            Err(e) => Err(e),
        }
    }

    /// Sum; infinities absorb finite values and `+inf + -inf` is undefined.
    pub fn add(&self, other: &RationalCut) -> Result<RationalCut> {
        match (&*self.0, &*other.0) {
            (Node::Infinite(a), Node::Infinite(b)) if a != b => {
                Err(Error::Undefined("sum of opposite infinities".into()))
            }
            (Node::Infinite(_), _) => Ok(self.clone()),
            (_, Node::Infinite(_)) => Ok(other.clone()),
            (Node::Exact(a), Node::Exact(b)) => Ok(Self::from_rational(a + b)),
            (_, Node::Exact(b)) if b.is_zero() => Ok(self.clone()),
            (Node::Exact(a), _) if a.is_zero() => Ok(other.clone()),
            _ => Ok(RationalCut(Arc::new(Node::Sum(self.clone(), other.clone())))),
        }
    }

    pub fn neg(&self) -> RationalCut {
        self.scale(&int(-1))
    }

    pub fn sub(&self, other: &RationalCut) -> Result<RationalCut> {
        self.add(&other.neg())
    }

    /// Product with a rational scalar; `0 · x = 0` and `c · ±inf` follows
    /// the sign of `c`.
    pub fn scale(&self, c: &Rational) -> RationalCut {
        if c.is_zero() {
            return Self::from_rational(Rational::zero());
        }
        if c.is_one() {
            return self.clone();
        }
        match &*self.0 {
            Node::Exact(q) => Self::from_rational(q * c),
            Node::Infinite(p) => RationalCut(Arc::new(Node::Infinite(*p == c.is_positive()))),
            Node::Scale(x, d) => x.scale(&(d * c)),
            _ => RationalCut(Arc::new(Node::Scale(self.clone(), c.clone()))),
        }
    }

    /// Product of two positive reals.
    pub fn mul_positive(&self, other: &RationalCut, budget: CutBudget) -> Result<RationalCut> {
        for x in [self, other] {
            if x.sign(budget)? != Ordering::Greater {
                return Err(Error::NonPositive);
            }
        }
        Ok(match (&*self.0, &*other.0) {
            (Node::Infinite(_), _) | (_, Node::Infinite(_)) => Self::pos_infinity(),
            (Node::Exact(c), _) => other.scale(c),
            (_, Node::Exact(c)) => self.scale(c),
            _ => RationalCut(Arc::new(Node::PosProduct(self.clone(), other.clone()))),
        })
    }

    /// Product of arbitrary reals by splitting on signs. An exact zero
    /// factor gives an exact zero without inspecting the other factor.
    pub fn mul_signed(&self, other: &RationalCut, budget: CutBudget) -> Result<RationalCut> {
        let zero = |x: &RationalCut| x.as_rational().is_some_and(Zero::is_zero);
        if zero(self) || zero(other) {
            return Ok(Self::from_rational(Rational::zero()));
        }
        let sa = self.sign(budget)?;
        let sb = other.sign(budget)?;
        if sa == Ordering::Equal || sb == Ordering::Equal {
            if self.is_infinite() || other.is_infinite() {
                return Err(Error::Undefined("product of zero and an infinity".into()));
            }
            return Ok(Self::from_rational(Rational::zero()));
        }
        let abs = |x: &RationalCut, s: Ordering| if s == Ordering::Less { x.neg() } else { x.clone() };
        let magnitude = abs(self, sa).mul_positive(&abs(other, sb), budget)?;
        Ok(if sa == sb { magnitude } else { magnitude.neg() })
    }
}

fn compare_location(q: &Rational, value: &Rational) -> Location {
    match q.cmp(value) {
        Ordering::Less => Location::Below,
        Ordering::Equal => Location::Equal,
        Ordering::Greater => Location::Above,
    }
}

fn check_bracket(o: &dyn LocateOracle, lo: &Rational, hi: &Rational) -> Result<()> {
    let bad = |what: String| Err(Error::OracleInconsistent(what));
    if lo > hi {
        return bad(format!("bracket [{}, {}] is reversed", format_rational(lo), format_rational(hi)));
    }
    if o.locate(lo) == Location::Above {
        return bad(format!("lower bracket end {} is above the value", format_rational(lo)));
    }
    if o.locate(hi) == Location::Below {
        return bad(format!("upper bracket end {} is below the value", format_rational(hi)));
    }
    Ok(())
}

fn bisect(o: &dyn LocateOracle, eps: &Rational, budget: CutBudget) -> Result<Enclosure> {
    let (mut lo, mut hi) = o.bracket();
    check_bracket(o, &lo, &hi)?;
    if o.locate(&lo) == Location::Equal {
        return Ok(Enclosure::point(lo));
    }
    if o.locate(&hi) == Location::Equal {
        return Ok(Enclosure::point(hi));
    }
    let two = int(2);
    let mut depth = 0;
    while &(&hi - &lo) > eps {
        if depth == budget.max_depth {
            return Err(Error::BudgetExceeded(budget.max_depth));
        }
        depth += 1;
        let mid = (&lo + &hi) / &two;
        match o.locate(&mid) {
            Location::Below => lo = mid,
            Location::Above => hi = mid,
            Location::Equal => return Ok(Enclosure::point(mid)),
        }
    }
    // A pure, monotone oracle keeps agreeing with the final endpoints.
    if o.locate(&lo) == Location::Above || o.locate(&hi) == Location::Below {
        return Err(Error::OracleInconsistent("answers changed during bisection".into()));
    }
    Ok(Enclosure { lo, hi })
}

/// Product of positive reals: with `M_a, M_b` upper bounds for the factors,
/// enclosures of width `δ = ε / (M_a + M_b)` give a product enclosure of
/// width at most `ε`.
fn refine_product(a: &RationalCut, b: &RationalCut, eps: &Rational, budget: CutBudget) -> Result<Enclosure> {
    let one = Rational::one();
    let ma = a.refine(&one, budget)?.hi;
    let mb = b.refine(&one, budget)?.hi;
    let mut delta = eps / (ma + mb);
    for _ in 0..=budget.max_depth {
        let ea = a.refine(&delta, budget)?;
        let eb = b.refine(&delta, budget)?;
        let lo = ea.lo.max(Rational::zero()) * eb.lo.max(Rational::zero());
        let hi = &ea.hi * &eb.hi;
        let e = Enclosure { lo, hi };
        if &e.width() <= eps {
            return Ok(e);
        }
        delta /= int(2);
    }
    Err(Error::BudgetExceeded(budget.max_depth))
}
