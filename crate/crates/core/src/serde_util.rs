//! Serialization helpers: exact numbers are written as strings, never as
//! JSON floats.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::linalg::{Rational, RatVector};

pub fn bigint_str<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

/// A JSON number when it fits in `u64`, otherwise a decimal string.
pub fn opt_count<S: Serializer>(value: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => match u64::try_from(v) {
            Ok(n) => s.serialize_u64(n),
            Err(_) => s.serialize_str(&v.to_string()),
        },
        None => s.serialize_none(),
    }
}

pub fn rational_str<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

pub fn opt_rational_str<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn ratvec_strs<S: Serializer>(value: &RatVector, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(value.dim()))?;
    for c in value.coords() {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

pub fn ratvecs_strs<S: Serializer>(value: &[RatVector], s: S) -> Result<S::Ok, S::Error> {
    let as_strings: Vec<Vec<String>> = value
        .iter()
        .map(|v| v.coords().iter().map(ToString::to_string).collect())
        .collect();
    let mut seq = s.serialize_seq(Some(as_strings.len()))?;
    for v in &as_strings {
        seq.serialize_element(v)?;
    }
    seq.end()
}
