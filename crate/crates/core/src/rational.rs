//! Exact rational scalars.
//!
//! All coefficients in this crate are arbitrary-precision rationals;
//! no floating point appears anywhere in the engine.

use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;
use num_traits::{One, Zero};

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form() {
        let r = ratio(2, 4);
        assert_eq!(r, ratio(1, 2));
        let neg = ratio(1, -2);
        assert_eq!(neg, ratio(-1, 2));
        assert!(neg.denom() > &num_bigint::BigInt::from(0));
    }

    #[test]
    fn zero_is_canonical() {
        assert_eq!(rat(0), ratio(0, 5));
    }
}
