//! Number formatting and JSON helpers shared by reports.

use serde_json::{json, Value};

use crate::scalar::{to_f64, Real, C};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Scientific notation with 12 significant digits.
pub fn fmt_num<T: Real>(x: T) -> String {
    format!("{:.11e}", to_f64(x))
}

/// Writes a CSV row of numbers.
pub fn csv_row<T: Real>(xs: &[T]) -> String {
    xs.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",")
}

/// `{"re": …, "im": …, "abs": …, "arg": …}`.
pub fn complex_json<T: Real>(z: C<T>) -> Value {
    json!({
        "re": to_f64(z.re),
        "im": to_f64(z.im),
        "abs": to_f64(z.norm()),
        "arg": to_f64(crate::scalar::arg(z)),
    })
}

/// Wraps a report body with the schema version.
pub fn with_schema(kind: &str, mut body: Value) -> Value {
    if let Value::Object(ref mut m) = body {
        m.insert("schema".into(), json!(SCHEMA_VERSION));
        m.insert("kind".into(), json!(kind));
    }
    body
}
