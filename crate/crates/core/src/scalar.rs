//! Exact rational scalars and their text form.
//!
//! Every number in the crate is a [`Scalar`]: an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. The text
//! form is `p/q` (or `p` when `q = 1`), which is also what the JSON
//! schemas carry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn zeros(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zeros(n);
    v[i] = one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Parses `p`, `-p`, `p/q` with optional surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |x: &str, allow_sign: bool| {
        let digits = if allow_sign { x.strip_prefix(['-', '+']).unwrap_or(x) } else { x };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(n, d))
}

pub fn format_rational(x: &Scalar) -> String {
    x.to_string()
}

/// Coefficient prefix for pretty-printed linear combinations.
pub(crate) fn coeff_prefix(c: &Scalar, first: bool) -> String {
    let sign = if c.is_negative() {
        "-"
    } else if first {
        ""
    } else {
        "+"
    };
    let a = c.abs();
    let mag = if a.is_one() { String::new() } else { format!("{a}*") };
    if first {
        format!("{sign}{mag}")
    } else {
        format!(" {sign} {mag}")
    }
}

pub(crate) mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scalar>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|r| parse_rational(r).map_err(serde::de::Error::custom)).collect()
    }
}

pub(crate) mod serde_matrix {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(m: &[Vec<Scalar>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Scalar>>, D::Error> {
        let raw: Vec<Vec<String>> = Vec::deserialize(d)?;
        raw.iter()
            .map(|row| row.iter().map(|r| parse_rational(r).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}
