//! Deterministic CSV buffers: fixed column order, `,` separator, `.`
//! decimal, floats in scientific notation with a fixed digit count so the
//! same config and seed always produce identical bytes.

use crate::Result;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Write to a file, or stdout when no path is given.
    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => {
                let mut f = std::fs::File::create(p)?;
                f.write_all(self.to_text().as_bytes())?;
            }
            None => {
                std::io::stdout().write_all(self.to_text().as_bytes())?;
            }
        }
        Ok(())
    }
}

/// Fixed-precision float cell.
pub fn num(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.10e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_stable() {
        assert_eq!(num(1.0), "1.0000000000e0");
        assert_eq!(num(f64::INFINITY), "inf");
        let mut csv = Csv::new(&["a", "b"]);
        csv.push(vec!["1".into(), num(0.5)]);
        assert_eq!(csv.to_text(), "a,b\n1,5.0000000000e-1\n");
    }
}
