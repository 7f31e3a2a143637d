//! Exact rational scalars.
//!
//! Every coefficient in the engine is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn minus_one() -> Rational {
    -Rational::one()
}

/// Result of parsing a `"p/q"` literal.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRational {
    pub value: Rational,
    /// Set when the literal was not already in lowest terms with a positive
    /// denominator and had to be normalized.
    pub normalized: bool,
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`. A zero denominator is an error.
pub fn parse_rational(text: &str) -> Result<ParsedRational, Error> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Input(format!("malformed rational {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Input(format!("malformed rational {text:?}")))?;
    if den.is_zero() {
        return Err(Error::Input(format!("zero denominator in {text:?}")));
    }
    let g = num.gcd(&den);
    let normalized = den.is_negative() || (!g.is_one() && !num.is_zero()) || (num.is_zero() && !den.is_one());
    Ok(ParsedRational {
        value: Rational::new(num, den),
        normalized,
    })
}

/// Generalized binomial coefficient `x choose m` as a falling factorial.
pub fn binomial(x: &Rational, m: u32) -> Rational {
    let mut acc = one();
    for i in 0..m {
        acc *= x - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

/// `(-1)^n` for any integer `n`.
pub fn sign(n: i64) -> Rational {
    if n.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

/// Floor of a rational as `i64`.
pub fn floor_i64(x: &Rational) -> i64 {
    use num_traits::ToPrimitive;
    x.floor().to_integer().to_i64().expect("floor out of i64 range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap().value, int(3));
        assert_eq!(parse_rational("-1/2").unwrap().value, frac(-1, 2));
        let p = parse_rational("2/4").unwrap();
        assert_eq!(p.value, frac(1, 2));
        assert!(p.normalized);
        assert!(!parse_rational("1/2").unwrap().normalized);
        assert!(parse_rational("1/-2").unwrap().normalized);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn canonical_zero() {
        let z = parse_rational("0/5").unwrap().value;
        assert_eq!(z, zero());
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(&int(5), 2), int(10));
        assert_eq!(binomial(&int(-1), 3), int(-1));
        assert_eq!(binomial(&int(-2), 2), int(3));
        // (1/2 choose 2) = (1/2)(-1/2)/2
        assert_eq!(binomial(&frac(1, 2), 2), frac(-1, 8));
        assert_eq!(binomial(&int(3), 5), zero());
    }
}
