//! The builtin family of range oracles and their linear combinations.
//!
//! On each open piece between breakpoints every regular term has the local
//! form `A·x + B + s·√x + q·x²` (steps are constant, tables linear), so the
//! regular part of a combination is again of that form and its extrema are
//! found among the piece ends and the single interior critical point. A
//! Dirichlet term `c·D` (1 on rationals, 0 elsewhere) shifts suprema by
//! `max(c, 0)` and infima by `min(c, 0)` on every open piece, since both
//! rationals and irrationals are dense. Square roots are rounded outward to
//! 64 fractional bits.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, sqrt_ceil, sqrt_floor, Rational};

use super::{ExtRange, RangeFunction, Side, Span};

const SQRT_BITS: u32 = 64;

/// A function constant on each open piece of a partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepFunction {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
    at_breaks: Option<Vec<Rational>>,
}

impl StepFunction {
    /// Values at breakpoints default to the value of the piece to the right
    /// (the last piece at the right end).
    pub fn new(breaks: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        Self::build(breaks, values, None)
    }

    pub fn with_break_values(breaks: Vec<Rational>, values: Vec<Rational>, at_breaks: Vec<Rational>) -> Result<Self> {
        Self::build(breaks, values, Some(at_breaks))
    }

    fn build(breaks: Vec<Rational>, values: Vec<Rational>, at_breaks: Option<Vec<Rational>>) -> Result<Self> {
        if breaks.len() < 2 || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("breakpoints must be strictly increasing, at least two".into()));
        }
        if values.len() + 1 != breaks.len() {
            return Err(Error::Invalid("a step function needs one value per piece".into()));
        }
        if at_breaks.as_ref().is_some_and(|v| v.len() != breaks.len()) {
            return Err(Error::Invalid("a step function needs one value per breakpoint".into()));
        }
        Ok(StepFunction {
            breaks,
            values,
            at_breaks,
        })
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn domain(&self) -> (Rational, Rational) {
        (self.breaks[0].clone(), self.breaks.last().unwrap().clone())
    }

    /// Value at `x`, which must lie in the domain.
    pub fn value(&self, x: &Rational) -> Rational {
        match self.breaks.binary_search(x) {
            Ok(i) => match &self.at_breaks {
                Some(v) => v[i].clone(),
                None => self.values[i.min(self.values.len() - 1)].clone(),
            },
            Err(i) => self.values[i.clamp(1, self.values.len()) - 1].clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Term {
    Step(StepFunction),
    Sqrt,
    Square,
    Table { xs: Vec<Rational>, ys: Vec<Rational> },
}

/// `a·x + b + s·√x + q·x²` on one open piece.
#[derive(Debug, Clone, Default)]
struct Local {
    a: Rational,
    b: Rational,
    s: Rational,
    q: Rational,
}

fn sqrt_pair(x: &Rational) -> (Rational, Rational) {
    (sqrt_floor(x, SQRT_BITS), sqrt_ceil(x, SQRT_BITS))
}

/// Scales an interval by `c`, flipping it when `c` is negative.
fn scale_pair((lo, hi): (Rational, Rational), c: &Rational) -> (Rational, Rational) {
    if c.is_negative() {
        (hi * c, lo * c)
    } else {
        (lo * c, hi * c)
    }
}

fn add_pair(a: (Rational, Rational), b: (Rational, Rational)) -> (Rational, Rational) {
    (a.0 + b.0, a.1 + b.1)
}

fn hull_pair(a: (Rational, Rational), b: (Rational, Rational)) -> (Rational, Rational) {
    (a.0.min(b.0), a.1.max(b.1))
}

impl Local {
    fn add_scaled(&mut self, other: &Local, c: &Rational) {
        self.a += &other.a * c;
        self.b += &other.b * c;
        self.s += &other.s * c;
        self.q += &other.q * c;
    }

    fn poly(&self, x: &Rational) -> Rational {
        &self.a * x + &self.b + &self.q * x * x
    }

    fn eval(&self, x: &Rational) -> (Rational, Rational) {
        let p = self.poly(x);
        if self.s.is_zero() {
            return (p.clone(), p);
        }
        add_pair((p.clone(), p), scale_pair(sqrt_pair(x), &self.s))
    }

    /// Infimum and supremum over the open piece `(u, v)`.
    fn range(&self, u: &Rational, v: &Rational) -> (Rational, Rational) {
        let mut r = hull_pair(self.eval(u), self.eval(v));
        let inside = |x: &Rational| u < x && x < v;
        if self.s.is_zero() {
            if !self.q.is_zero() {
                let vertex = -&self.a / (int(2) * &self.q);
                if inside(&vertex) {
                    let y = self.poly(&vertex);
                    r = hull_pair(r, (y.clone(), y));
                }
            }
        } else if self.q.is_zero() {
            // d/dx (s·√x + a·x) vanishes at √x = -s / 2a.
            if !self.a.is_zero() {
                let root = -&self.s / (int(2) * &self.a);
                let x = &root * &root;
                if root.is_positive() && inside(&x) {
                    let y = &self.b - &self.s * &self.s / (int(4) * &self.a);
                    r = hull_pair(r, (y.clone(), y));
                }
            }
        } else {
            // Both curvatures present: bound the two parts separately.
            let poly = Local {
                s: Rational::zero(),
                ..self.clone()
            };
            let root = scale_pair(hull_pair(sqrt_pair(u), sqrt_pair(v)), &self.s);
            r = add_pair(poly.range(u, v), root);
        }
        r
    }
}

impl Term {
    fn breaks(&self) -> &[Rational] {
        match self {
            Term::Step(s) => s.breaks(),
            Term::Table { xs, .. } => xs,
            Term::Sqrt | Term::Square => &[],
        }
    }

    fn value(&self, x: &Rational) -> (Rational, Rational) {
        match self {
            Term::Step(s) => {
                let v = s.value(x);
                (v.clone(), v)
            }
            Term::Sqrt => sqrt_pair(x),
            Term::Square => {
                let v = x * x;
                (v.clone(), v)
            }
            Term::Table { .. } => {
                let l = self.local_at(x, x);
                let v = l.poly(x);
                (v.clone(), v)
            }
        }
    }

    /// Local form on an open piece around `mid` free of breakpoints; `u, v`
    /// are its ends.
    fn local_at(&self, u: &Rational, v: &Rational) -> Local {
        let mid = (u + v) / int(2);
        match self {
            Term::Step(s) => Local {
                b: s.value_inside(&mid, u, v),
                ..Local::default()
            },
            Term::Sqrt => Local {
                s: Rational::one(),
                ..Local::default()
            },
            Term::Square => Local {
                q: Rational::one(),
                ..Local::default()
            },
            Term::Table { xs, ys } => {
                let i = match xs.binary_search(&mid) {
                    Ok(i) => i.min(xs.len() - 2),
                    Err(i) => i.clamp(1, xs.len() - 1) - 1,
                };
                let slope = (&ys[i + 1] - &ys[i]) / (&xs[i + 1] - &xs[i]);
                Local {
                    b: &ys[i] - &slope * &xs[i],
                    a: slope,
                    ..Local::default()
                }
            }
        }
    }
}

impl StepFunction {
    /// Piece value at `mid`, strictly inside a piece when `u < v`.
    fn value_inside(&self, mid: &Rational, u: &Rational, v: &Rational) -> Rational {
        if u == v {
            return self.value(mid);
        }
        match self.breaks.binary_search(mid) {
            Ok(i) => self.values[i.min(self.values.len() - 1)].clone(),
            Err(i) => self.values[i.clamp(1, self.values.len()) - 1].clone(),
        }
    }
}

/// A linear combination of builtin oracles on a common interval.
///
/// The regular terms are kept merged (equal terms add coefficients, the
/// affine parts fold into one), so cancellations such as `D + (1 - D) = 1`
/// are seen by the range computation.
#[derive(Debug, Clone)]
pub struct OracleFunction {
    a: Rational,
    b: Rational,
    slope: Rational,
    intercept: Rational,
    dirichlet: Rational,
    terms: Vec<(Rational, Term)>,
    label: String,
}

impl PartialEq for OracleFunction {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && self.slope == other.slope
            && self.intercept == other.intercept
            && self.dirichlet == other.dirichlet
            && self.terms == other.terms
    }
}

impl Eq for OracleFunction {}

impl OracleFunction {
    fn base(a: Rational, b: Rational, label: impl Into<String>) -> Result<Self> {
        if a >= b {
            return Err(Error::Invalid("interval must have positive length".into()));
        }
        Ok(OracleFunction {
            a,
            b,
            slope: Rational::zero(),
            intercept: Rational::zero(),
            dirichlet: Rational::zero(),
            terms: Vec::new(),
            label: label.into(),
        })
    }

    pub fn identity(a: Rational, b: Rational) -> Result<Self> {
        Self::affine(a, b, Rational::one(), Rational::zero()).map(|f| f.with_label("identity"))
    }

    /// `p·x + q`.
    pub fn affine(a: Rational, b: Rational, p: Rational, q: Rational) -> Result<Self> {
        let label = format!("affine({}, {})", format_rational(&p), format_rational(&q));
        let mut f = Self::base(a, b, label)?;
        f.slope = p;
        f.intercept = q;
        Ok(f)
    }

    pub fn constant(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        let label = format!("constant({})", format_rational(&c));
        Self::affine(a, b, Rational::zero(), c).map(|f| f.with_label(label))
    }

    pub fn step(s: StepFunction) -> Result<Self> {
        let (a, b) = s.domain();
        let mut f = Self::base(a, b, "step")?;
        f.terms.push((Rational::one(), Term::Step(s)));
        Ok(f)
    }

    /// 1 on rationals, 0 on irrationals.
    pub fn dirichlet(a: Rational, b: Rational) -> Result<Self> {
        let mut f = Self::base(a, b, "dirichlet")?;
        f.dirichlet = Rational::one();
        Ok(f)
    }

    pub fn sqrt(a: Rational, b: Rational) -> Result<Self> {
        if a.is_negative() {
            return Err(Error::OutsideDomain(format!("{} for a square root", format_rational(&a))));
        }
        let mut f = Self::base(a, b, "sqrt")?;
        f.terms.push((Rational::one(), Term::Sqrt));
        Ok(f)
    }

    pub fn square(a: Rational, b: Rational) -> Result<Self> {
        let mut f = Self::base(a, b, "square")?;
        f.terms.push((Rational::one(), Term::Square));
        Ok(f)
    }

    /// Linear interpolation through monotone table points.
    pub fn monotone_table(xs: Vec<Rational>, ys: Vec<Rational>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() || xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(
                "a table needs at least two points with strictly increasing abscissae".into(),
            ));
        }
        let up = ys.windows(2).all(|w| w[0] <= w[1]);
        let down = ys.windows(2).all(|w| w[0] >= w[1]);
        if !up && !down {
            return Err(Error::NotMonotone("table values are neither non-decreasing nor non-increasing".into()));
        }
        let mut f = Self::base(xs[0].clone(), xs.last().unwrap().clone(), "monotone-table")?;
        f.terms.push((Rational::one(), Term::Table { xs, ys }));
        Ok(f)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `c1·self + c2·other`.
    pub fn combine(&self, c1: &Rational, other: &OracleFunction, c2: &Rational) -> Result<Self> {
        if self.a != other.a || self.b != other.b {
            return Err(Error::Mismatch("functions live on different intervals".into()));
        }
        let mut f = OracleFunction {
            a: self.a.clone(),
            b: self.b.clone(),
            slope: &self.slope * c1 + &other.slope * c2,
            intercept: &self.intercept * c1 + &other.intercept * c2,
            dirichlet: &self.dirichlet * c1 + &other.dirichlet * c2,
            terms: Vec::new(),
            label: format!(
                "{}·({}) + {}·({})",
                format_rational(c1),
                self.label,
                format_rational(c2),
                other.label
            ),
        };
        let scaled = |g: &OracleFunction, c: &Rational| g.terms.iter().map(|(k, t)| (k * c, t.clone())).collect::<Vec<_>>();
        for (k, t) in scaled(self, c1).into_iter().chain(scaled(other, c2)) {
            match f.terms.iter_mut().find(|(_, u)| *u == t) {
                Some((acc, _)) => *acc += k,
                None => f.terms.push((k, t)),
            }
        }
        f.terms.retain(|(k, _)| !k.is_zero());
        Ok(f)
    }

    pub fn add(&self, other: &OracleFunction) -> Result<Self> {
        self.combine(&Rational::one(), other, &Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let zero = OracleFunction {
            terms: Vec::new(),
            slope: Rational::zero(),
            intercept: Rational::zero(),
            dirichlet: Rational::zero(),
            ..self.clone()
        };
        let mut f = self.combine(c, &zero, &Rational::zero()).expect("same interval");
        f.label = format!("{}·({})", format_rational(c), self.label);
        f
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    fn interior_breaks(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let mut out: Vec<Rational> = self
            .terms
            .iter()
            .flat_map(|(_, t)| t.breaks().iter())
            .filter(|x| lo < *x && *x < hi)
            .cloned()
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn local(&self, u: &Rational, v: &Rational) -> Local {
        let mut l = Local {
            a: self.slope.clone(),
            b: self.intercept.clone(),
            ..Local::default()
        };
        for (c, t) in &self.terms {
            l.add_scaled(&t.local_at(u, v), c);
        }
        l
    }

    fn point(&self, x: &Rational) -> (Rational, Rational) {
        let base = &self.slope * x + &self.intercept + &self.dirichlet;
        self.terms
            .iter()
            .fold((base.clone(), base), |acc, (c, t)| add_pair(acc, scale_pair(t.value(x), c)))
    }

    fn open_piece(&self, u: &Rational, v: &Rational) -> (Rational, Rational) {
        let (lo, hi) = self.local(u, v).range(u, v);
        let zero = Rational::zero();
        (lo + (&self.dirichlet).min(&zero), hi + (&self.dirichlet).max(&zero))
    }

    /// Limit of the regular part at `x` from the piece on the given side.
    fn one_sided(&self, x: &Rational, left: bool) -> Option<(Rational, Rational)> {
        let breaks = self.interior_breaks(&self.a, &self.b);
        let (u, v) = if left {
            if x <= &self.a {
                return None;
            }
            let u = breaks.iter().rfind(|p| *p < x).unwrap_or(&self.a).clone();
            (u, x.clone())
        } else {
            if x >= &self.b {
                return None;
            }
            let v = breaks.iter().find(|p| *p > x).unwrap_or(&self.b).clone();
            (x.clone(), v)
        };
        Some(self.local(&u, &v).eval(x))
    }
}

impl RangeFunction for OracleFunction {
    fn domain(&self) -> (Rational, Rational) {
        (self.a.clone(), self.b.clone())
    }

    fn range_on(&self, span: &Span) -> ExtRange {
        let (lo, lo_closed) = if span.lo < self.a {
            (self.a.clone(), true)
        } else {
            (span.lo.clone(), span.lo_closed)
        };
        let (hi, hi_closed) = if span.hi > self.b {
            (self.b.clone(), true)
        } else {
            (span.hi.clone(), span.hi_closed)
        };
        if lo >= hi {
            let (l, h) = self.point(&lo);
            return ExtRange::finite(l, h);
        }
        let mut cuts = vec![lo.clone()];
        cuts.extend(self.interior_breaks(&lo, &hi));
        cuts.push(hi.clone());
        let mut r = self.open_piece(&cuts[0], &cuts[1]);
        for w in cuts.windows(2).skip(1) {
            r = hull_pair(r, self.open_piece(&w[0], &w[1]));
        }
        for x in &cuts[1..cuts.len() - 1] {
            r = hull_pair(r, self.point(x));
        }
        if lo_closed {
            r = hull_pair(r, self.point(&lo));
        }
        if hi_closed {
            r = hull_pair(r, self.point(&hi));
        }
        ExtRange::finite(r.0, r.1)
    }

    fn value_at(&self, x: &Rational) -> Option<Rational> {
        if x < &self.a || x > &self.b {
            return None;
        }
        let (lo, hi) = self.point(x);
        (lo == hi).then_some(lo)
    }

    fn breakpoints(&self) -> Vec<Rational> {
        self.interior_breaks(&self.a, &self.b)
    }

    fn oscillation_floor(&self, _span: &Span) -> Option<Rational> {
        (!self.dirichlet.is_zero()).then(|| self.dirichlet.abs())
    }

    fn jump_at(&self, x0: &Rational, side: Side) -> Option<Rational> {
        let left = self.one_sided(x0, true);
        let right = self.one_sided(x0, false);
        let here = Some(self.point(x0));
        let seen: Vec<(Rational, Rational)> = match side {
            Side::Closed => vec![left, here, right],
            Side::Punctured => vec![left, right],
            Side::Left => vec![left],
            Side::Right => vec![right],
        }
        .into_iter()
        .flatten()
        .collect();
        // Every neighbourhood gets arbitrarily close to each of these values.
        let spread = match (seen.iter().map(|p| &p.0).max(), seen.iter().map(|p| &p.1).min()) {
            (Some(top), Some(bottom)) => (top - bottom).max(Rational::zero()),
            _ => Rational::zero(),
        };
        let g = spread.max(self.dirichlet.abs());
        (g.cmp(&Rational::zero()) == Ordering::Greater).then_some(g)
    }
}

fn unit_interval() -> Option<[String; 2]> {
    None
}

/// JSON description of a builtin oracle or a combination of them.
/// Rationals are `"p/q"` or decimal strings; `interval` defaults to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "oracle", rename_all = "kebab-case")]
pub enum FunctionSpec {
    Identity {
        #[serde(default = "unit_interval", skip_serializing_if = "Option::is_none")]
        interval: Option<[String; 2]>,
    },
    Affine {
        p: String,
        q: String,
        #[serde(default = "unit_interval", skip_serializing_if = "Option::is_none")]
        interval: Option<[String; 2]>,
    },
    Constant {
        value: String,
        #[serde(default = "unit_interval", skip_serializing_if = "Option::is_none")]
        interval: Option<[String; 2]>,
    },
    Step {
        breaks: Vec<String>,
        values: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at_breaks: Option<Vec<String>>,
    },
    Dirichlet {
        #[serde(default = "unit_interval", skip_serializing_if = "Option::is_none")]
        interval: Option<[String; 2]>,
    },
    Sqrt {
        #[serde(default = "unit_interval", skip_serializing_if = "Option::is_none")]
        interval: Option<[String; 2]>,
    },
    Square {
        #[serde(default = "unit_interval", skip_serializing_if = "Option::is_none")]
        interval: Option<[String; 2]>,
    },
    MonotoneTable {
        xs: Vec<String>,
        ys: Vec<String>,
    },
    Combination {
        terms: Vec<WeightedSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSpec {
    pub coeff: String,
    pub function: FunctionSpec,
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn interval(i: &Option<[String; 2]>) -> Result<(Rational, Rational)> {
    match i {
        Some([a, b]) => Ok((parse_rational(a)?, parse_rational(b)?)),
        None => Ok((Rational::zero(), Rational::one())),
    }
}

impl FunctionSpec {
    pub fn build(&self) -> Result<OracleFunction> {
        match self {
            FunctionSpec::Identity { interval: i } => {
                let (a, b) = interval(i)?;
                OracleFunction::identity(a, b)
            }
            FunctionSpec::Affine { p, q, interval: i } => {
                let (a, b) = interval(i)?;
                OracleFunction::affine(a, b, parse_rational(p)?, parse_rational(q)?)
            }
            FunctionSpec::Constant { value, interval: i } => {
                let (a, b) = interval(i)?;
                OracleFunction::constant(a, b, parse_rational(value)?)
            }
            FunctionSpec::Step {
                breaks,
                values,
                at_breaks,
            } => {
                let s = match at_breaks {
                    Some(v) => StepFunction::with_break_values(parse_all(breaks)?, parse_all(values)?, parse_all(v)?)?,
                    None => StepFunction::new(parse_all(breaks)?, parse_all(values)?)?,
                };
                OracleFunction::step(s)
            }
            FunctionSpec::Dirichlet { interval: i } => {
                let (a, b) = interval(i)?;
                OracleFunction::dirichlet(a, b)
            }
            FunctionSpec::Sqrt { interval: i } => {
                let (a, b) = interval(i)?;
                OracleFunction::sqrt(a, b)
            }
            FunctionSpec::Square { interval: i } => {
                let (a, b) = interval(i)?;
                OracleFunction::square(a, b)
            }
            FunctionSpec::MonotoneTable { xs, ys } => OracleFunction::monotone_table(parse_all(xs)?, parse_all(ys)?),
            FunctionSpec::Combination { terms } => {
                let (first, rest) = terms
                    .split_first()
                    .ok_or_else(|| Error::Invalid("a combination needs at least one term".into()))?;
                let mut acc = first.function.build()?.scale(&parse_rational(&first.coeff)?);
                for t in rest {
                    acc = acc.combine(&Rational::one(), &t.function.build()?, &parse_rational(&t.coeff)?)?;
                }
                Ok(acc)
            }
        }
    }
}
