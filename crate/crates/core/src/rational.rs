//! Rendering helpers for exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;

/// `num/den` with a positive denominator, also for integers.
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// serde adapter writing a rational as `num/den`.
pub fn serialize<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

/// An integer-valued quantity written as `n/1`.
pub fn serialize_int<S: serde::Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/1", v))
}

pub fn serialize_opt_int<S: serde::Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&format!("{}/1", v)),
        None => s.serialize_none(),
    }
}

pub fn serialize_opt<S: serde::Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&fmt_rational(q)),
        None => s.serialize_none(),
    }
}
