//! Serde helpers for exact rationals.
//!
//! Rationals are written as strings `"p/q"`; on input either a string or a
//! plain JSON number is accepted (numbers are read through their shortest
//! decimal form, so `0.1` becomes `1/10`).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::math::{fmt_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JsonRational(pub Rational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Text(String),
    Int(i64),
    Float(f64),
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match Repr::deserialize(d)? {
            Repr::Text(t) => t,
            Repr::Int(i) => i.to_string(),
            Repr::Float(f) => format!("{f:e}"),
        };
        parse_rational(&text).map(JsonRational).map_err(serde::de::Error::custom)
    }
}

/// A kernel or table value: exact rationals serialise as `"p/q"` strings,
/// floats as JSON numbers.
pub trait JsonValue: Sized {
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> crate::Result<Self>;
}

impl JsonValue for Rational {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(fmt_rational(self))
    }
    fn from_json(v: &serde_json::Value) -> crate::Result<Self> {
        serde_json::from_value::<JsonRational>(v.clone())
            .map(|r| r.0)
            .map_err(|e| crate::Error::Input(e.to_string()))
    }
}

impl JsonValue for f64 {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
    }
    fn from_json(v: &serde_json::Value) -> crate::Result<Self> {
        match v {
            serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| crate::Error::input("bad number")),
            serde_json::Value::String(s) => parse_rational(s).map(|r| crate::math::to_f64(&r)),
            other => Err(crate::Error::Input(format!("expected a number, got {other}"))),
        }
    }
}
