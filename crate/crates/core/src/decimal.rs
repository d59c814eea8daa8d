//! Decimal-string serialization of floating-point outputs.

use serde::{Deserialize, Deserializer, Serializer};
use serde_json::Value;

/// Significant digits used for reported (not reloaded) values.
pub const REPORT_DIGITS: usize = 12;

/// `x` in scientific notation with `digits` significant digits.
pub fn fmt(x: f64, digits: usize) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{:.*e}", digits.max(1) - 1, x)
    }
}

/// Replaces every non-integer JSON number by its decimal string.
pub fn decimalize(v: Value, digits: usize) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => Value::String(fmt(n.as_f64().expect("f64"), digits)),
        Value::Array(a) => Value::Array(a.into_iter().map(|x| decimalize(x, digits)).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, decimalize(x, digits))).collect()),
        other => other,
    }
}

/// Exact round-trip form: 17 significant digits.
pub mod exact {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt(*x, 17))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Num(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(fmt(1.5, 3), "1.50e0");
        assert_eq!(fmt(f64::INFINITY, 3), "inf");
        let v = decimalize(serde_json::json!({"a": [0.25, 3], "b": "x"}), 2);
        assert_eq!(v, serde_json::json!({"a": ["2.5e-1", 3], "b": "x"}));
    }

    #[test]
    fn exact_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 12345.678901234567, f64::MIN_POSITIVE] {
            assert_eq!(fmt(x, 17).parse::<f64>().unwrap(), x);
        }
    }
}
