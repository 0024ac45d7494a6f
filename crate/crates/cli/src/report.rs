//! Deterministic run reports. The JSON written to stdout contains the
//! schema version, the command, the tool version, hashes of every resolved
//! input and the outcome payload; wall time goes to stderr so identical
//! inputs always produce byte-identical stdout.

use serde_json::{json, Map, Value};

/// 64-bit FNV-1a of the resolved input bytes.
pub fn fnv1a(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    format!("fnv1a:{hash:016x}")
}

pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub payload: Value,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "inputs": Value::Object(self.inputs.clone()),
            "payload": self.payload,
        })
    }

    /// Flat human-readable rendering of the payload.
    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("command: {}", self.command)];
        render(&self.payload, "", &mut lines);
        lines.join("\n")
    }
}

fn render(value: &Value, prefix: &str, lines: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render(v, &key, lines);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                render(v, &format!("{prefix}[{i}]"), lines);
            }
        }
        other => lines.push(format!("{prefix}: {other}")),
    }
}
