use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// Provenance block embedded in every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub input_digest: String,
    pub artifact_version: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: BTreeMap<String, Value>, input: &[u8]) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            input_digest: digest(input),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// `sha256:<hex>` of the input bytes.
pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Rounds to six significant digits; zero and non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Number text shared by CSV tables: six significant digits, `inf`/`-inf`
/// for infinities and an empty field for NaN.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        let text = serde_json::Number::from_f64(round_sig(x)).map(|n| n.to_string()).unwrap_or_default();
        match text.strip_suffix(".0") {
            Some(whole) => whole.to_string(),
            None => text,
        }
    }
}

/// `{"manifest": ..., "report": ...}` with every float rounded, as pretty
/// JSON ending in a newline.
pub fn render_json(manifest: &RunManifest, report: Value) -> String {
    let mut doc = Map::new();
    doc.insert("manifest".into(), serde_json::to_value(manifest).expect("manifest serializes"));
    doc.insert("report".into(), report);
    let mut doc = Value::Object(doc);
    round_value(&mut doc);
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    text.push('\n');
    text
}
