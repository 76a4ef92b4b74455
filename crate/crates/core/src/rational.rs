//! Exact rational scalars.
//!
//! All coefficients in the crate are arbitrary-precision rationals, kept
//! reduced with a positive denominator. `num_rational::BigRational` already
//! maintains exactly that invariant, so we use it directly.

use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;
use num_traits::{One, Signed, Zero};

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational n/d. Panics if d = 0.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_zero(x: &Rational) -> bool {
    x.is_zero()
}

pub fn is_one(x: &Rational) -> bool {
    x.is_one()
}

pub fn is_positive(x: &Rational) -> bool {
    x.is_positive()
}

/// Parse "p/q" or "p". The denominator must be nonzero.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(n))
        }
    }
}

/// Render as "p/q", or "p" when the denominator is 1.
pub fn format(x: &Rational) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_sign_normalization() {
        let x = ratio(4, -6);
        assert_eq!(x, ratio(-2, 3));
        assert_eq!(format(&x), "-2/3");
        assert!(x.denom() > &BigInt::from(0));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "5", "-7/3", "22/7"] {
            let x = parse(s).unwrap();
            assert_eq!(parse(&format(&x)).unwrap(), x);
        }
        assert!(parse("1/0").is_none());
        assert!(parse("a").is_none());
    }
}
