//! Arbitrary-precision rationals.
//!
//! `Rational` is `num_rational::BigRational`: always stored in lowest terms
//! with a positive denominator, and zero is 0/1. The helpers here cover the
//! handful of constructions and string conversions the rest of the crate
//! needs.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// n as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// n/d as a rational (normalized by the constructor).
///
/// Panics if d = 0; callers pass literal denominators.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "a" or "a/b" with optional sign. Rejects anything else, floats
/// included.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    Rational::from_str(s).map_err(|e| Error::Parse(format!("bad rational literal {s:?}: {e}")))
}

/// Exact square root, if the rational is a perfect square.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Rational::zero());
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Renders the canonical "a" / "a/b" form used in all wire output.
pub fn to_string(x: &Rational) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn parses_integer_and_fraction_literals() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("-7/2").unwrap(), ratio(-7, 2));
        assert_eq!(parse("4/8").unwrap(), ratio(1, 2));
        assert!(parse("1.5").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn square_roots_are_exact_or_absent() {
        assert_eq!(exact_sqrt(&ratio(9, 4)).unwrap(), ratio(3, 2));
        assert_eq!(exact_sqrt(&int(1)).unwrap(), Rational::one());
        assert!(exact_sqrt(&int(2)).is_none());
        assert!(exact_sqrt(&int(-4)).is_none());
    }
}
