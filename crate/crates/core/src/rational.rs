//! Exact rationals: parsing and string serialization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"a/b"`, an integer, or a finite decimal such as `"0.25"`.
pub fn parse(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: `{s}`"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let num = int * &den + frac.parse::<BigInt>().map_err(|_| bad())?;
        let value = BigRational::new(num, den);
        return Ok(if neg { -value } else { value });
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

pub fn from_ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `floor(q * n)` for non-negative `q`.
pub fn floor_mul(q: &BigRational, n: usize) -> usize {
    (q * BigRational::from_integer(n.into()))
        .floor()
        .to_integer()
        .to_usize()
        .unwrap_or(0)
}

/// Serde adapter writing a rational as its `Display` string (`"6/7"`, `"2"`).
pub mod serde_str {
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(de::Error::custom)
    }
}

/// Like [`serde_str`] for optional values.
pub mod serde_opt_str {
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.collect_str(q),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| super::parse(&s).map_err(de::Error::custom))
            .transpose()
    }
}
