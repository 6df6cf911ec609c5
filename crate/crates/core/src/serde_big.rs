//! JSON helpers: big integers as numbers when they fit in i64, else decimal strings.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::Serializer;

pub fn big_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

pub fn ubig_to_json(x: &BigUint) -> serde_json::Value {
    match x.to_u64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

pub fn ser_bigint_vecs<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    let rows: Vec<Vec<serde_json::Value>> =
        v.iter().map(|r| r.iter().map(big_to_json).collect()).collect();
    rows.serialize(s)
}

pub fn ser_opt_bigint_vec<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    v.as_ref()
        .map(|r| r.iter().map(big_to_json).collect::<Vec<_>>())
        .serialize(s)
}

pub fn ser_biguint_matrix<S: Serializer>(v: &[Vec<BigUint>], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    let rows: Vec<Vec<serde_json::Value>> =
        v.iter().map(|r| r.iter().map(ubig_to_json).collect()).collect();
    rows.serialize(s)
}

/// Parse a JSON number or decimal string as a non-negative big integer.
pub fn json_to_biguint(v: &serde_json::Value) -> Option<BigUint> {
    match v {
        serde_json::Value::Number(n) => n.as_u64().map(BigUint::from),
        serde_json::Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

pub fn rational_to_json(q: &num_rational::BigRational) -> serde_json::Value {
    if q.is_integer() {
        big_to_json(q.numer())
    } else {
        serde_json::Value::from(q.to_string())
    }
}

/// Rational from a JSON integer or a string such as `"-3/4"`.
pub fn json_to_rational(v: &serde_json::Value) -> Option<num_rational::BigRational> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(|i| num_rational::BigRational::from_integer(i.into())),
        serde_json::Value::String(s) => crate::cyclo::scalar::parse_rational(s).ok(),
        _ => None,
    }
}

pub fn ser_rationals<S: Serializer>(v: &[num_rational::BigRational], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    v.iter().map(rational_to_json).collect::<Vec<_>>().serialize(s)
}

pub fn de_rationals<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<num_rational::BigRational>, D::Error> {
    use serde::Deserialize;
    let raw = Vec::<serde_json::Value>::deserialize(d)?;
    raw.iter()
        .map(|v| json_to_rational(v).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {v}"))))
        .collect()
}
