use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub duration_seconds: f64,
    /// SHA-256 of the compact report JSON, manifest excluded.
    pub checksum: String,
}

pub fn checksum(report: &Map<String, Value>) -> String {
    let bytes = serde_json::to_vec(report).expect("JSON values always serialize");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Attaches the manifest under `"manifest"`.
pub fn finish(mut report: Map<String, Value>, manifest: RunManifest) -> Value {
    report.insert(
        "manifest".into(),
        serde_json::to_value(manifest).expect("manifest serializes"),
    );
    Value::Object(report)
}

/// One `path = value` line per leaf.
pub fn pretty(v: &Value) -> String {
    let mut lines = Vec::new();
    flatten("", v, &mut lines);
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    lines
        .into_iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, out);
            }
        }
        // short numeric rows read better on one line
        Value::Array(items)
            if !items.is_empty() && items.iter().all(|x| !x.is_object() && !is_nested(x)) =>
        {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), cells.join(", ")));
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), child, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn is_nested(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.iter().any(|x| x.is_array() || x.is_object()))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}
