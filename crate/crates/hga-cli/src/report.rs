//! Report envelope shared by every subcommand.
//!
//! Each report is a JSON object with the same top-level keys: `version`,
//! `command`, `inputs`, `bounds {lower, upper}`, `witnesses`, `residuals`,
//! plus whatever the command adds. Floats are serialized with 17 significant
//! digits so a report round-trips losslessly through text.

use hga_core::WeightedSample;
use serde_json::{json, Map, Value};

/// A float as a JSON number carrying 17 significant digits (`null` for
/// non-finite values, which JSON cannot represent).
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{:.16e}", x);
    // With arbitrary_precision the parsed number keeps the literal digits.
    Value::Number(serde_json::from_str(&text).expect("formatted float is a JSON number"))
}

pub fn num_list(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// A witness sample with its recomputed means, labeled by which endpoint it
/// attains.
pub fn witness(kind: &str, sample: &WeightedSample) -> Value {
    let m = sample.means();
    json!({
        "kind": kind,
        "values": num_list(sample.values()),
        "weights": num_list(sample.weights()),
        "means": { "h": num(m.h), "g": num(m.g), "a": num(m.a) },
    })
}

/// The fixed envelope; command-specific fields are merged in via `extra`.
pub fn envelope(
    command: &str,
    inputs: Value,
    bounds: (Option<f64>, Option<f64>),
    witnesses: Vec<Value>,
    residuals: Value,
    extra: Value,
) -> Value {
    let mut obj = Map::new();
    obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    obj.insert("command".into(), json!(command));
    obj.insert("inputs".into(), inputs);
    obj.insert(
        "bounds".into(),
        json!({
            "lower": bounds.0.map(num).unwrap_or(Value::Null),
            "upper": bounds.1.map(num).unwrap_or(Value::Null),
        }),
    );
    obj.insert("witnesses".into(), Value::Array(witnesses));
    obj.insert("residuals".into(), residuals);
    if let Value::Object(extra) = extra {
        for (k, v) in extra {
            obj.insert(k, v);
        }
    }
    Value::Object(obj)
}

/// Flatten a report into `key = value` lines for `--format text`.
///
/// Nested objects become dotted paths, arrays are inlined; the order follows
/// the JSON object order, so the envelope keys always come first.
pub fn to_text(report: &Value) -> String {
    let mut out = String::new();
    flatten("", report, &mut out);
    out
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&path, v, out);
            }
        }
        Value::Array(items) => {
            let inline: Vec<String> = items.iter().map(render_scalar).collect();
            out.push_str(&format!("{prefix} = [{}]\n", inline.join(", ")));
        }
        other => {
            out.push_str(&format!("{prefix} = {}\n", render_scalar(other)));
        }
    }
}

fn render_scalar(value: &Value) -> String {
    match value {
        Value::Object(_) | Value::Array(_) => {
            serde_json::to_string(value).unwrap_or_else(|_| "?".into())
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn rel_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
