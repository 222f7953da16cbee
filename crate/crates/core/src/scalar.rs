//! Exact rational scalars.
//!
//! Every number the library produces is a [`Scalar`], an arbitrary precision
//! rational kept in lowest terms with a positive denominator. On the wire
//! they are strings: `"p/q"`, or just `"p"` when the denominator is one.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_biguint(n: &BigUint) -> Scalar {
    Scalar::from_integer(BigInt::from(n.clone()))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn format(x: &Scalar) -> String {
    x.to_string()
}

pub fn parse(s: &str) -> Result<Scalar> {
    let bad = || Error::InvalidRational(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(p, q))
}

/// Serde adapter storing a [`Scalar`] as its `"p/q"` string.
pub mod serde_str {
    use super::Scalar;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format(&ratio(2, 4)), "1/2");
        assert_eq!(format(&ratio(4, -6)), "-2/3");
        assert_eq!(format(&int(24)), "24");
        assert_eq!(format(&int(0)), "0");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["1/2", "-7/5760", "0", "123456789012345678901234567891/2"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(binomial(8, 3), BigUint::from(56u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
    }
}
