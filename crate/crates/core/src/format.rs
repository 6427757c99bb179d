//! JSON fan files.
//!
//! ```json
//! {
//!   "name": "p2",
//!   "dim": 2,
//!   "rays": [[1, 0], [0, 1], [-1, -1]],
//!   "max_cones": [[0, 1], [1, 2], [0, 2]]
//! }
//! ```
//!
//! An optional `"metadata"` object is carried through untouched.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::fan::{FanData, FanError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid fan: {0}")]
    Semantic(#[from] FanError),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanFile {
    name: String,
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    #[serde(default)]
    metadata: BTreeMap<String, serde_json::Value>,
}

/// A validated fan together with its file-level name and metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedFan {
    pub name: String,
    pub fan: FanData,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

pub fn parse_fan(text: &str) -> Result<NamedFan, FormatError> {
    let file: FanFile = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let fan = FanData::new(file.dim, file.rays, file.max_cones)?;
    Ok(NamedFan { name: file.name, fan, metadata: file.metadata })
}

fn int_rows<T: ToString>(rows: impl Iterator<Item = Vec<T>>) -> String {
    let rendered: Vec<String> = rows
        .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rendered.join(", "))
}

/// Renders a fan in the file format, one field per line.
pub fn serialize_fan(named: &NamedFan) -> String {
    let fan = &named.fan;
    let mut out = String::from("{\n");
    writeln!(out, "  \"name\": {},", serde_json::Value::String(named.name.clone())).unwrap();
    writeln!(out, "  \"dim\": {},", fan.dim()).unwrap();
    writeln!(out, "  \"rays\": {},", int_rows(fan.rays().iter().cloned())).unwrap();
    write!(out, "  \"max_cones\": {}", int_rows(fan.max_cones().iter().cloned())).unwrap();
    if !named.metadata.is_empty() {
        let meta = serde_json::to_string(&named.metadata).expect("metadata is JSON");
        write!(out, ",\n  \"metadata\": {meta}").unwrap();
    }
    out.push_str("\n}\n");
    out
}

/// SHA-256 of the canonical fan content: rank, rays in input order, and
/// the sorted list of sorted cones. Names, metadata and cone order do not
/// contribute.
pub fn input_digest(fan: &FanData) -> String {
    let mut cones = fan.max_cones().to_vec();
    cones.sort();
    let canonical = format!(
        "dim={};rays={};cones={}",
        fan.dim(),
        int_rows(fan.rays().iter().cloned()),
        int_rows(cones.into_iter())
    );
    hex::encode(Sha256::digest(canonical.as_bytes()))
}
