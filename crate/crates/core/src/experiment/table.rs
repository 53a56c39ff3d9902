//! Versioned CSV tables.
//!
//! Layout: `#`-prefixed metadata lines (schema version, command, root seed,
//! notes), then a header row of `name[unit]` cells, then data rows. Floats
//! are written in shortest round-trip form so reruns are byte-identical.

use std::io::Write;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    meta: Vec<(String, String)>,
    columns: Vec<(&'static str, &'static str)>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// `columns` are `(name, unit)` pairs; use `"-"` for unitless labels.
    pub fn new(command: &str, seed: u64, columns: &[(&'static str, &'static str)]) -> Self {
        Self {
            meta: vec![
                ("schema".into(), format!("secure-qos-table v{SCHEMA_VERSION}")),
                ("command".into(), command.into()),
                ("seed".into(), seed.to_string()),
            ],
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.meta.push(("note".into(), text.into()));
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| *n == name)
    }

    /// Values of a numeric column; unparsable cells become NaN.
    pub fn numeric_column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| r[k].parse().unwrap_or(f64::NAN))
                .collect(),
        )
    }

    pub fn write<W: Write>(&self, mut writer: W) -> Result<()> {
        for (k, v) in &self.meta {
            writeln!(writer, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.columns.iter().map(|(n, u)| format!("{n}[{u}]")))?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip text of a float.
pub fn num(x: f64) -> String {
    format!("{x}")
}
