//! Deterministic CSV and JSON artifact writing: '.' decimals, '\n' line
//! endings, no locale dependence, no timestamps. Re-running with the same
//! configuration reproduces every file byte for byte.

use crate::Result;
use serde_json::Value;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// The files and summary produced by one experiment run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub summary: Value,
    pub files: Vec<PathBuf>,
    pub output_dir: PathBuf,
}

/// A CSV cell: floats use Rust's shortest round-trip formatting, missing
/// values render as empty fields.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::UInt(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Str(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }
}

fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v}")
    }
}

pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "csv row width mismatch");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, self.render())?;
        Ok(())
    }
}

/// Write pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| crate::HarnessError::Io(std::io::Error::other(e)))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rendering() {
        let mut t = CsvTable::new(&["a", "b", "c"]);
        t.push(vec![Cell::UInt(1), Cell::Float(0.5), Cell::Missing]);
        t.push(vec![Cell::UInt(2), Cell::Float(-1.25e-8), "x".into()]);
        let text = t.render();
        assert_eq!(text, "a,b,c\n1,0.5,\n2,-0.0000000125,x\n");
    }

    #[test]
    fn float_formatting_round_trips() {
        for v in [1.0, -0.1, 1e300, std::f64::consts::PI, f64::MIN_POSITIVE] {
            let s = format_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v, back, "{s}");
        }
    }
}
