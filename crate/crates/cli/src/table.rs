//! Tabular output. CSV is canonical; JSON is an array of row objects with
//! the same keys in the same order.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Self::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Self::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Self::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Self::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}

// Shortest round-trip digits; exponent form outside the range where the
// positional form stays short.
fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Self::Num(v) => format_float(*v),
            Self::Int(v) => v.to_string(),
            Self::Text(s) => s.clone(),
            Self::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Self::Int(v) => Value::from(*v),
            Self::Text(s) => Value::from(s.as_str()),
            Self::Bool(b) => Value::from(*b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let ser = |e: csv::Error| CliError::Serialize(e.to_string());
                w.write_record(&self.columns).map_err(ser)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::text)).map_err(ser)?;
                }
                w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(m)
                    })
                    .collect();
                let mut out = serde_json::to_vec_pretty(&rows).map_err(|e| CliError::Serialize(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

/// Writes to `out` through a temporary file in the same directory and a
/// rename, or to stdout.
pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        return stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|source| CliError::Write {
            path: "<stdout>".into(),
            source,
        });
    };
    let werr = |source| CliError::Write { path: path.to_owned(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(werr)?;
    tmp.write_all(bytes).map_err(werr)?;
    tmp.as_file().sync_all().map_err(werr)?;
    tmp.persist(path).map_err(|e| werr(e.error))?;
    Ok(())
}
