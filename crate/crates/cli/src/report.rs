//! Report assembly and rendering. Every command emits one report, as
//! canonical JSON or as an indented text rendering of the same data, so
//! identical inputs produce byte-identical output in either format.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            tool: "opdef",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn digest_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: hex });
        Ok(())
    }

    pub fn set_result(&mut self, value: impl Serialize) -> Result<()> {
        self.result = serde_json::to_value(value).context("serializing result")?;
        Ok(())
    }

    pub fn render(&self, format: crate::Format) -> Result<String> {
        match format {
            crate::Format::Json => {
                let mut s = serde_json::to_string_pretty(self).context("rendering json")?;
                s.push('\n');
                Ok(s)
            }
            crate::Format::Text => Ok(self.render_text()),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "opdef {} :: {}", self.version, self.command);
        for input in &self.inputs {
            let _ = writeln!(out, "input {} sha256={}", input.path, input.sha256);
        }
        render_value(&mut out, &self.result, 0);
        out
    }
}

fn is_scalar(v: &Value) -> bool {
    matches!(v, Value::Null | Value::Bool(_) | Value::Number(_) | Value::String(_))
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => unreachable!(),
    }
}

fn render_inline(v: &Value) -> Option<String> {
    match v {
        _ if is_scalar(v) => Some(render_scalar(v)),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(render_inline).collect();
            let parts = parts?;
            let joined = format!("[{}]", parts.join(", "));
            if joined.len() <= 100 {
                Some(joined)
            } else {
                None
            }
        }
        _ => None,
    }
}

fn render_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                if let Some(inline) = render_inline(val) {
                    let _ = writeln!(out, "{pad}{k}: {inline}");
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_value(out, val, indent + 1);
                }
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                if let Some(inline) = render_inline(val) {
                    let _ = writeln!(out, "{pad}- {inline}");
                } else {
                    let _ = writeln!(out, "{pad}- [{i}]");
                    render_value(out, val, indent + 1);
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{}", render_scalar(v));
        }
    }
}
