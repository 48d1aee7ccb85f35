//! Exact rationals. Backed by `num_rational::BigRational`, which keeps values
//! in canonical reduced form with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Precondition(format!("`{text}` is not a rational of the form num/den"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Precondition(format!("`{text}` has a zero denominator")));
    }
    Ok(Rational::new(n, d))
}

/// Parses a rational and checks it lies in [0, 1].
pub fn parse_probability(text: &str) -> Result<Rational> {
    let q = parse_rational(text)?;
    if q < Rational::zero() || q > Rational::one() {
        return Err(Error::Precondition(format!("`{text}` is outside [0, 1]")));
    }
    Ok(q)
}

/// Always `num/den`, including for integers (`0/1`, `1/1`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("6/27").unwrap(), ratio(2, 9));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2/1");
        assert_eq!(format_rational(&int(0)), "0/1");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_probability("3/2").is_err());
        assert!(parse_probability("-1/2").is_err());
        assert_eq!(parse_probability("0/1").unwrap(), int(0));
    }
}
