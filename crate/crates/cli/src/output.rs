//! Deterministic tabular output.
//!
//! Data files carry '#'-prefixed metadata lines (the resolved configuration
//! and mode flags), one header row, and rows of floats printed with 17
//! significant digits. Identical configurations produce byte-identical
//! files: no timestamps, fixed column order, fixed formatting.

use std::fmt::Write as _;
use std::path::Path;

use crate::commands::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Metadata lines, stored without the leading "# ".
    pub meta: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, line: impl Into<String>) {
        self.meta.push(line.into());
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// 17 significant digits; parses back to the identical f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_csv_string(table: &Table) -> String {
    let mut s = String::new();
    for line in &table.meta {
        let _ = writeln!(s, "# {line}");
    }
    let _ = writeln!(s, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

pub fn to_json_string(table: &Table, config: serde_json::Value) -> String {
    let mut series = serde_json::Map::new();
    for (i, name) in table.columns.iter().enumerate() {
        let values: Vec<serde_json::Value> = table
            .rows
            .iter()
            .map(|r| serde_json::json!(r[i]))
            .collect();
        series.insert(name.clone(), serde_json::Value::Array(values));
    }
    let doc = serde_json::json!({
        "config": config,
        "meta": table.meta,
        "columns": table.columns,
        "series": series,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json serialization");
    text.push('\n');
    text
}

pub fn write_csv(path: &Path, table: &Table) -> Result<(), CliError> {
    std::fs::write(path, to_csv_string(table)).map_err(CliError::Io)
}

pub fn write_json(path: &Path, table: &Table, config: serde_json::Value) -> Result<(), CliError> {
    std::fs::write(path, to_json_string(table, config)).map_err(CliError::Io)
}

/// Parse a CSV written by [`write_csv`]; re-emitting the result is
/// byte-identical to the original file.
pub fn read_csv(path: &Path) -> Result<Table, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
    let mut meta = Vec::new();
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# ") {
            meta.push(rest.to_string());
        } else if let Some(rest) = line.strip_prefix('#') {
            meta.push(rest.to_string());
        } else if columns.is_empty() {
            columns = line.split(',').map(|s| s.to_string()).collect();
        } else if !line.is_empty() {
            let row: Result<Vec<f64>, _> = line.split(',').map(|c| c.parse::<f64>()).collect();
            rows.push(row.map_err(|e| CliError::Config(format!("bad CSV cell: {e}")))?);
        }
    }
    Ok(Table {
        meta,
        columns,
        rows,
    })
}

/// Log-scale value for polar plot files: dB relative to `reference`,
/// clamped at -60 dB so pattern nulls stay finite.
pub fn db_clamped(value: f64, reference: f64) -> f64 {
    if reference <= 0.0 {
        return -60.0;
    }
    let db = 10.0 * (value / reference).log10();
    if db.is_finite() {
        db.max(-60.0)
    } else {
        -60.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.0, 1.0, -0.3333333333333333, 1e-300, 2.0 / 3.0, 1.0053096491487338] {
            let s = fmt_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let mut t = Table::new(&["a", "b"]);
        t.push_meta("k = v");
        t.push_row(vec![1.0, 2.0 / 3.0]);
        t.push_row(vec![-1e-12, 3.5]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_csv(&path, &t).unwrap();
        let text1 = std::fs::read_to_string(&path).unwrap();
        let parsed = read_csv(&path).unwrap();
        assert_eq!(to_csv_string(&parsed), text1);
        assert_eq!(parsed, t);
    }

    #[test]
    fn db_clamp() {
        assert_eq!(db_clamped(0.0, 1.0), -60.0);
        assert_eq!(db_clamped(1.0, 1.0), 0.0);
        assert!((db_clamped(0.1, 1.0) + 10.0).abs() < 1e-12);
        assert_eq!(db_clamped(1e-30, 1.0), -60.0);
    }
}
