//! Arbitrary-precision rationals and small integer helpers.

use num_bigint::BigInt;
use num_integer::Integer;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// gcd of absolute values; the gcd of an empty list is 0.
pub fn exponent_gcd(es: &[i64]) -> u64 {
    es.iter().fold(0i64, |g, &e| g.gcd(&e)).unsigned_abs()
}
