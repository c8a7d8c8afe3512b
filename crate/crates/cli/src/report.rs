//! Report envelope, deterministic serialization and atomic output.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::schema::SCHEMA;

pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<(String, String)>,
    pub params: Map<String, Value>,
    pub results: Value,
    /// Whether the computation found a violated invariant.
    pub findings: bool,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|(path, hash)| json!({"path": path, "sha256": hash}))
            .collect();
        json!({
            "schema": SCHEMA,
            "tool": "mackey-lab",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs": inputs,
            "params": self.params,
            "results": self.results,
        })
    }

    pub fn render(&self, text: bool) -> String {
        let v = self.to_json();
        if text {
            let mut out = String::new();
            flatten(&v, "", &mut out);
            out
        } else {
            let mut s = serde_json::to_string_pretty(&v).expect("serializable report");
            s.push('\n');
            s
        }
    }
}

/// One `path: value` line per scalar leaf.
fn flatten(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(x, &p, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push_str(&format!("{prefix}: {}\n", Value::Array(a.clone())));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, &format!("{prefix}[{i}]"), out);
            }
        }
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path.file_name().context("output path has no file name")?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    {
        let mut f =
            std::fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))
}
