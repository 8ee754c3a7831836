//! Exact rational coefficients.
//!
//! Every coefficient in the engine is a `Scalar`, an arbitrary-precision
//! rational kept in canonical form (reduced, positive denominator) by
//! `num-rational`. There is no floating point anywhere in the engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Scalar = BigRational;

/// Scalar from an integer.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Scalar from a numerator/denominator pair. Panics on zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_one(s: &Scalar) -> bool {
    s.is_one()
}

pub fn is_minus_one(s: &Scalar) -> bool {
    s.is_integer() && s.numer().magnitude().is_one() && s.is_negative()
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(ratio(2, 4), ratio(1, 2));
        assert_eq!(ratio(1, -2), ratio(-1, 2));
        assert_eq!(ratio(-3, -3), int(1));
    }

    #[test]
    fn minus_one_detection() {
        assert!(is_minus_one(&int(-1)));
        assert!(!is_minus_one(&int(1)));
        assert!(!is_minus_one(&ratio(-1, 2)));
    }
}
