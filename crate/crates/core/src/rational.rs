//! Exact rationals, their `"p/q"` text form, and the extended line
//! `{-inf} ∪ Q ∪ {+inf}` used for infima and suprema.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical `"p/q"` form; the denominator is always written, even when it is 1.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational literal"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("`{s}` has a zero denominator")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = whole.abs() * &scale + frac;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(numer, scale));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Largest `k/2^bits` not exceeding `sqrt(x)`; `x` must be non-negative.
pub fn sqrt_floor(x: &Rational, bits: u32) -> Rational {
    debug_assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * bits);
    let scaled = (x.numer() * &scale) / x.denom();
    Rational::new(scaled.sqrt(), BigInt::one() << bits)
}

/// Smallest `k/2^bits` not below `sqrt(x)`; `x` must be non-negative.
pub fn sqrt_ceil(x: &Rational, bits: u32) -> Rational {
    let lo = sqrt_floor(x, bits);
    if &(&lo * &lo) == x {
        lo
    } else {
        lo + Rational::new(BigInt::one(), BigInt::one() << bits)
    }
}

/// Exact square root when `x` is the square of a rational.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

pub(crate) mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A point of the extended rational line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    /// Sum with the convention that opposite infinities are undefined.
    pub fn checked_add(&self, other: &Extended) -> Option<Extended> {
        use Extended::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
        }
    }

    /// Product with a rational scalar; `0 * ±inf = 0`.
    pub fn scale(&self, a: &Rational) -> Extended {
        use Extended::*;
        if a.is_zero() {
            return Finite(Rational::zero());
        }
        match self {
            Finite(q) => Finite(q * a),
            PosInf if a.is_positive() => PosInf,
            PosInf => NegInf,
            NegInf if a.is_positive() => NegInf,
            NegInf => PosInf,
        }
    }
}

impl From<Rational> for Extended {
    fn from(q: Rational) -> Self {
        Extended::Finite(q)
    }
}

impl Neg for Extended {
    type Output = Extended;
    fn neg(self) -> Extended {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::PosInf => Extended::NegInf,
            Extended::Finite(q) => Extended::Finite(-q),
        }
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        use Extended::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::PosInf => f.write_str("+inf"),
            Extended::Finite(q) => f.write_str(&format_rational(q)),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "-inf" => Ok(Extended::NegInf),
            "+inf" | "inf" => Ok(Extended::PosInf),
            other => parse_rational(other)
                .map(Extended::Finite)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(format_rational(&int(0)), "0/1");
    }

    #[test]
    fn sqrt_rounding_brackets() {
        let two = int(2);
        let lo = sqrt_floor(&two, 20);
        let hi = sqrt_ceil(&two, 20);
        assert!(&lo * &lo < two && &hi * &hi > two);
        assert_eq!(&hi - &lo, Rational::new(BigInt::one(), BigInt::one() << 20));
        assert_eq!(sqrt_floor(&rat(9, 4), 8), rat(3, 2));
        assert_eq!(sqrt_ceil(&rat(9, 4), 8), rat(3, 2));
        assert_eq!(exact_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(exact_sqrt(&int(2)), None);
    }

    #[test]
    fn extended_order_and_arithmetic() {
        let a = Extended::Finite(int(1));
        assert!(Extended::NegInf < a && a < Extended::PosInf);
        assert_eq!(a.checked_add(&Extended::PosInf), Some(Extended::PosInf));
        assert_eq!(Extended::PosInf.checked_add(&Extended::NegInf), None);
        assert_eq!(Extended::PosInf.scale(&int(0)), Extended::Finite(int(0)));
        assert_eq!(Extended::PosInf.scale(&int(-2)), Extended::NegInf);
        assert_eq!(-Extended::NegInf, Extended::PosInf);
    }
}
