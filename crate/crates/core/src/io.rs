//! Versioned JSON files. Every document carries a `"format"` tag naming its
//! kind and version.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::PointConfiguration;
use crate::triangulation::Triangulation;

pub const CONFIG_FORMAT: &str = "tropcay-config/1";
pub const POLYNOMIAL_FORMAT: &str = "tropcay-polynomial/1";
pub const CURVE_FORMAT: &str = "tropcay-curve/1";
pub const TRIANGULATION_FORMAT: &str = "tropcay-triangulation/1";

/// Serializes `value` as an object with a `"format"` field added.
pub fn to_versioned<T: Serialize>(format: &str, value: &T) -> Result<Value> {
    let mut v = serde_json::to_value(value)?;
    match v.as_object_mut() {
        Some(obj) => {
            obj.insert("format".into(), Value::String(format.into()));
            Ok(v)
        }
        None => Err(Error::Parse(format!("{format} documents must be JSON objects"))),
    }
}

/// Inverse of [`to_versioned`]. A missing tag is accepted; a different one
/// is an error.
pub fn from_versioned<T: DeserializeOwned>(format: &str, mut v: Value) -> Result<T> {
    if let Some(obj) = v.as_object_mut() {
        match obj.remove("format") {
            None => {}
            Some(Value::String(f)) if f == format => {}
            Some(other) => return Err(Error::Parse(format!("expected format {format:?}, found {other}"))),
        }
    }
    Ok(serde_json::from_value(v)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path, format: &str) -> Result<T> {
    let text = fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    from_versioned(format, v)
}

pub fn write_json<T: Serialize>(path: &Path, format: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&to_versioned(format, value)?)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// One line of a triangulation stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationRecord {
    pub format: String,
    pub cells: Vec<Vec<usize>>,
    pub letters: String,
}

impl TriangulationRecord {
    pub fn new(t: &Triangulation, config: &PointConfiguration) -> Self {
        Self { format: TRIANGULATION_FORMAT.into(), cells: t.index_cells(), letters: t.to_letters(config) }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Reads a stream line: a record, a bare array of index cells, or a letter
/// string.
pub fn parse_triangulation_line(line: &str, config: &PointConfiguration) -> Result<Triangulation> {
    let line = line.trim();
    if line.starts_with('{') {
        let rec: TriangulationRecord = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
        if rec.format != TRIANGULATION_FORMAT {
            return Err(Error::Parse(format!("unsupported format {:?}", rec.format)));
        }
        return checked(&rec.cells, config);
    }
    if line.starts_with('[') {
        let cells: Vec<Vec<usize>> = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
        return checked(&cells, config);
    }
    Triangulation::from_letters(line.trim_matches('"'), config)
}

fn checked(cells: &[Vec<usize>], config: &PointConfiguration) -> Result<Triangulation> {
    match cells.iter().flatten().find(|&&i| i >= config.len()) {
        Some(i) => Err(Error::Parse(format!("point index {i} out of range"))),
        None => Ok(Triangulation::from_index_cells(cells)),
    }
}
