//! Exact rational values used for every cost, ratio and bound.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Arbitrary-precision rational.
pub type Rational = BigRational;

pub fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or an integer. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    if s.is_empty() || s.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!(
            "expected an integer or a p/q rational, got {s:?}"
        )));
    }
    let value = Rational::from_str(s)
        .map_err(|_| Error::Parse(format!("not a rational literal: {s:?}")))?;
    Ok(value)
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn render(r: &Rational) -> String {
    r.to_string()
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &Rational, exp: u64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn factorial(n: u64) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * int(i))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// A positive rational split into small integer parts, used in the
/// enumeration hot loops where every candidate is compared by scaled keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SmallRatio {
    pub num: u128,
    pub den: u128,
}

impl SmallRatio {
    pub fn from_rational(r: &Rational) -> Result<Self, Error> {
        if r.is_negative() {
            return Err(Error::InvalidConfig(format!(
                "negative rational {r} where a positive one is required"
            )));
        }
        let num = r.numer().to_u64();
        let den = r.denom().to_u64();
        match (num, den) {
            (Some(num), Some(den)) => Ok(Self {
                num: num as u128,
                den: den as u128,
            }),
            _ => Err(Error::InvalidConfig(format!(
                "rational {r} has components beyond 64 bits"
            ))),
        }
    }
}

/// A rational extended with `+inf`, for cost ratios whose denominator is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtRational {
    Finite(Rational),
    Infinite,
}

impl ExtRational {
    /// `num / den`, with `0/0 = 1` and `x/0 = +inf` for `x > 0`.
    pub fn quotient(num: u64, den: u64) -> Self {
        match (num, den) {
            (0, 0) => ExtRational::Finite(Rational::one()),
            (_, 0) => ExtRational::Infinite,
            (n, d) => ExtRational::Finite(Rational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinite)
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinite) => Ordering::Less,
            (ExtRational::Infinite, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinite, ExtRational::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "inf" {
            Ok(ExtRational::Infinite)
        } else {
            parse_rational(s).map(ExtRational::Finite)
        }
    }
}

impl Default for ExtRational {
    fn default() -> Self {
        ExtRational::Finite(Rational::zero())
    }
}

/// Serde adapter writing a [`Rational`] as a `"p/q"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/4").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), ratio(3, 4));
    }

    #[test]
    fn rejects_decimals() {
        assert!(parse_rational("0.25").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn renders_canonical_form() {
        assert_eq!(render(&ratio(10, 3)), "10/3");
        assert_eq!(render(&ratio(4, 4)), "1");
    }

    #[test]
    fn quotient_sentinels() {
        assert_eq!(ExtRational::quotient(0, 0), ExtRational::Finite(int(1)));
        assert_eq!(ExtRational::quotient(3, 0), ExtRational::Infinite);
        assert_eq!(ExtRational::quotient(4, 3), ExtRational::Finite(ratio(4, 3)));
        assert!(ExtRational::Infinite > ExtRational::Finite(int(1_000_000)));
    }

    #[test]
    fn powers_and_factorials() {
        assert_eq!(pow(&ratio(3, 2), 3), ratio(27, 8));
        assert_eq!(pow(&int(7), 0), int(1));
        assert_eq!(factorial(4), int(24));
        assert_eq!(factorial(0), int(1));
    }
}
