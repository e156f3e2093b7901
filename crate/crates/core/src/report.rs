//! Serialization helpers shared by the machine-readable reports.

use std::fmt::Display;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serializer};

use crate::quadring::QuadInt;

/// Big integers travel as decimal strings.
pub fn ser_decimal<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn ser_decimal_vec<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Lossless round trip of a big integer through a decimal string.
pub mod decimal_str {
    use super::*;
    use num_bigint::BigUint;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub mod decimal_str_vec {
    use super::*;
    use num_bigint::BigUint;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        ser_decimal_vec(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Exact rationals travel as `"a/b"` (or `"a"` when integral).
pub fn ser_ratio<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&ratio_string(v))
}

pub fn ratio_string(v: &BigRational) -> String {
    if v.denom() == &1.into() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn ser_quad<S: Serializer>(v: &QuadInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Parse `"a/b"` or `"a"` into an exact rational.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().ok()?, d.trim().parse().ok()?),
        None => (s.parse().ok()?, 1.into()),
    };
    if d == 0.into() {
        return None;
    }
    Some(BigRational::new(n, d))
}
