//! Serialization helpers shared by the report types.

use serde::Serializer;

/// Ratios: `None` becomes `null`, infinity becomes the string `"inf"`.
pub fn ratio<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        None => s.serialize_none(),
        Some(v) if v.is_infinite() && *v > 0.0 => s.serialize_str("inf"),
        Some(v) if v.is_infinite() => s.serialize_str("-inf"),
        Some(v) => s.serialize_f64(*v),
    }
}
