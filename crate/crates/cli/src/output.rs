//! Fixed-format emission: `#` header lines, comma-separated rows and
//! seventeen significant digits so every double survives a round trip.

use std::io::{self, Write};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `{:.16e}`: one leading digit plus sixteen decimals.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn header(out: &mut dyn Write, command: &str, config_hash: &str) -> io::Result<()> {
    writeln!(out, "# zitter {VERSION}")?;
    writeln!(out, "# command: {command}")?;
    writeln!(out, "# config-hash: {config_hash}")
}

pub fn row(out: &mut dyn Write, values: &[f64]) -> io::Result<()> {
    let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
    writeln!(out, "{}", cells.join(","))
}

/// Buffered table that goes either to its own file or inline to the main stream.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let index = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[index]).collect())
    }

    pub fn write(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for values in &self.rows {
            row(out, values)?;
        }
        Ok(())
    }
}
