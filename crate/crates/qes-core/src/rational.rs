//! Exact rational scalars.
//!
//! `Rational` is arbitrary-precision and always in lowest terms with a
//! positive denominator, which `num_rational::BigRational` guarantees on
//! construction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Rational from an integer numerator/denominator pair.
///
/// Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Nearest `f64`, saturating on overflow.
pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else if r.is_zero() {
            0.0
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational from an `f64` (every finite double is a rational).
///
/// Panics if `x` is NaN or infinite.
pub fn rat_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("non-finite float")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let r = rat(6, -4);
        assert_eq!(r, rat(-3, 2));
        assert!(r.denom() > &BigInt::from(0));
    }

    #[test]
    fn f64_round_trip() {
        let x = 0.1f64;
        assert_eq!(rat_to_f64(&rat_from_f64(x)), x);
    }
}
