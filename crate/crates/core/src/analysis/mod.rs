//! Limits and integrals as extensions of partial maps on function spaces.
//!
//! Functions are range oracles: for every subinterval they report the exact
//! infimum and supremum of their values. Filter limits compare the infima and
//! suprema over a descending chain of stages; Darboux sums weight piece
//! infima and suprema by piece length. Everything stays in exact rationals.

mod function;
mod integral;
mod limit;
mod linearity;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{Extended, Rational};

pub use function::{FunctionSpec, OracleFunction, StepFunction};
pub use integral::{
    darboux_sums, integrate, step_integral, DarbouxSums, IntegrateOptions, IntegrationResult, IntegrationVerdict,
    Partition, Strategy,
};
pub use limit::{
    continuity_check, filter_limit, punctured_limit, sequence_limit, simplest_rational, FilterBasis, FunctionStages,
    LimitResult, LimitVerdict, Sequence, Stage, StageOracle, StageRange,
};
pub use linearity::{linearity_audit, Functional};

/// A rational interval with independently open or closed ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Span {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Span {
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Span {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        Span {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(
            f,
            "{l}{}, {}{r}",
            Extended::Finite(self.lo.clone()),
            Extended::Finite(self.hi.clone())
        )
    }
}

/// Infimum and supremum of a set of values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtRange {
    pub inf: Extended,
    pub sup: Extended,
}

impl ExtRange {
    pub fn new(inf: Extended, sup: Extended) -> Self {
        ExtRange { inf, sup }
    }

    pub fn finite(inf: Rational, sup: Rational) -> Self {
        ExtRange {
            inf: Extended::Finite(inf),
            sup: Extended::Finite(sup),
        }
    }

    pub fn point(q: Rational) -> Self {
        Self::finite(q.clone(), q)
    }

    pub fn hull(&self, other: &ExtRange) -> ExtRange {
        ExtRange {
            inf: self.inf.clone().min(other.inf.clone()),
            sup: self.sup.clone().max(other.sup.clone()),
        }
    }

    /// `sup - inf`, infinite when either end is.
    pub fn width(&self) -> Extended {
        match (&self.inf, &self.sup) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(b - a),
            _ => Extended::PosInf,
        }
    }
}

/// Which part of a neighbourhood of a point a stage keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `[x0 - δ, x0 + δ]`.
    Closed,
    /// `[x0 - δ, x0 + δ]` without `x0`.
    Punctured,
    /// `(x0 - δ, x0)`.
    Left,
    /// `(x0, x0 + δ)`.
    Right,
}

/// A real function on a closed rational interval, known through its exact
/// ranges on subintervals.
///
/// `range_on` must be monotone under inclusion of spans and contain every
/// point value offered by `value_at`.
pub trait RangeFunction: Send + Sync + fmt::Debug {
    fn domain(&self) -> (Rational, Rational);

    /// Infimum and supremum over `span`, which lies inside the domain.
    fn range_on(&self, span: &Span) -> ExtRange;

    fn value_at(&self, _x: &Rational) -> Option<Rational> {
        None
    }

    /// Points where the function may jump; partitions start aligned to them.
    fn breakpoints(&self) -> Vec<Rational> {
        Vec::new()
    }

    /// A lower bound on `sup - inf` over every nonempty open subinterval of
    /// `span`, when one is known.
    fn oscillation_floor(&self, _span: &Span) -> Option<Rational> {
        None
    }

    /// A lower bound on `sup - inf` over every neighbourhood of `x0` of the
    /// given kind, when one is known.
    fn jump_at(&self, _x0: &Rational, _side: Side) -> Option<Rational> {
        None
    }
}
