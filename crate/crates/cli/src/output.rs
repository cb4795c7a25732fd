//! Artifact rendering. Every artifact starts with the same JSON header: the
//! command, the canonical config, its SHA-256 and the crate versions. CSV
//! carries it on a leading `# ` line, JSON under the key `header`.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub fn config_hash(config: &ExperimentConfig) -> String {
    let digest = Sha256::digest(config.canonical().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn header(config: &ExperimentConfig) -> Value {
    json!({
        "tool": "dppzeros",
        "command": config.name(),
        "config": serde_json::to_value(config).expect("config serialises"),
        "config_hash": config_hash(config),
        "versions": {
            "dppzeros": env!("CARGO_PKG_VERSION"),
            "dppzeros-core": dppzeros_core::VERSION,
        },
    })
}

/// 17 significant digits, so every double round-trips.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// JSON numbers cannot hold NaN or infinities; those become `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| num(*x)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Csv(Table),
    Json(Value),
}

impl Artifact {
    pub fn render(&self, header: &Value) -> String {
        match self {
            Artifact::Csv(t) => {
                let mut out = format!("# {}\n", serde_json::to_string(header).expect("header serialises"));
                out.push_str(&t.columns.join(","));
                out.push('\n');
                for row in &t.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Int(i) => i.to_string(),
                            Cell::Float(x) => fmt_float(*x),
                        })
                        .collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Artifact::Json(v) => {
                let mut body = serde_json::Map::new();
                body.insert("header".into(), header.clone());
                if let Value::Object(m) = v {
                    body.extend(m.clone());
                } else {
                    body.insert("data".into(), v.clone());
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(body)).expect("artifact serialises");
                s.push('\n');
                s
            }
        }
    }
}

/// Writes to `path`, or stdout when absent.
pub fn write(text: &str, path: Option<&str>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(Path::new(p), text).map_err(|e| CliError::io(format!("{p}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
