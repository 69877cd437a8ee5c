//! CSV assembly with a pinned number format.
//!
//! Every float is written as scientific notation with ten significant
//! digits, so identical inputs produce byte-identical files. The parameter
//! echo goes to stderr, keeping stdout (or the `--out` file) pure CSV.

use anyhow::{Context, Result};
use std::io::Write;
use std::path::PathBuf;

/// A float rendered for CSV: scientific, 9 fractional digits.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

/// One CSV document: a mandatory header row plus data rows.
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { lines: vec![header.join(",")] }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn render(&self) -> String {
        let mut text = self.lines.join("\n");
        text.push('\n');
        text
    }

    /// Write to the given path, or stdout when the destination is `None`
    /// or `-`.
    pub fn write(&self, out: &Option<PathBuf>) -> Result<()> {
        let text = self.render();
        match out {
            Some(path) if path.as_os_str() != "-" => std::fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?,
            _ => std::io::stdout().write_all(text.as_bytes()).context("writing stdout")?,
        }
        Ok(())
    }
}

/// Echo a resolved `key = value` parameter line to stderr.
pub fn echo(key: &str, value: impl std::fmt::Display) {
    eprintln!("{key} = {value}");
}

/// Echo a whole pre-rendered parameter block to stderr.
pub fn echo_block(block: &str) {
    eprint!("{block}");
}
