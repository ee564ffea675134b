//! Exact rationals and extended coordinates.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number used for every grid value and coordinate.
pub type Rational = BigRational;

/// Builds `num / den` in lowest terms. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3/4"`, `"-2"`, `"0.75"` or `"1e-3"`-free decimal text exactly.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mantissa = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}

/// Canonical text form: integer or `p/q` in lowest terms.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// A coordinate of the extended real line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Coord {
    pub fn finite(value: Rational) -> Self {
        Coord::Finite(value)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Coord::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Coord::Finite(_))
    }

    /// The reflection `x -> -x`.
    pub fn negate(&self) -> Coord {
        match self {
            Coord::NegInf => Coord::PosInf,
            Coord::PosInf => Coord::NegInf,
            Coord::Finite(v) => Coord::Finite(-v),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Coord::NegInf => true,
            Coord::PosInf => false,
            Coord::Finite(v) => v.is_negative(),
        }
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        use Coord::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for Coord {
    fn from(value: Rational) -> Self {
        Coord::Finite(value)
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "-inf" => Ok(Coord::NegInf),
            "inf" | "+inf" => Ok(Coord::PosInf),
            other => parse_rational(other).map(Coord::Finite),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::NegInf => f.write_str("-inf"),
            Coord::PosInf => f.write_str("inf"),
            Coord::Finite(v) => f.write_str(&format_rational(v)),
        }
    }
}

/// A rational or `+inf`; the value of an infimum over a possibly empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Finite(Rational),
    Infinite,
}

impl Bound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Infinite => None,
        }
    }

    pub fn min(self, other: Bound) -> Bound {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Infinite, Bound::Infinite) => Ordering::Equal,
            (Bound::Infinite, _) => Ordering::Greater,
            (_, Bound::Infinite) => Ordering::Less,
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => f.write_str(&format_rational(v)),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}
