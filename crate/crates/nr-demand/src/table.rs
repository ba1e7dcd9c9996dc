//! Tabular command output.
//!
//! Every subcommand produces one [`OutputTable`]: named columns, typed
//! cells, and a list of meta entries (seed, scenario path, summary
//! statistics) that travel with the data. Two renderings exist, chosen by
//! the user: CSV with `# key = value` comment headers, and flat records
//! (one `key = value` line per cell, blank line between rows). Both parse
//! back losslessly for the tables the tool emits: floating-point cells are
//! rendered with at least six significant digits and always with enough to
//! reproduce the exact value, integers are rendered exactly, and cell types
//! are recovered by trying integer then float parses. A table with no rows
//! renders as headers only, so the records form cannot recover its columns.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One value in a table. Integers and floats render differently (exact vs
/// six-significant-digit minimum), so the distinction is kept explicit.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format_sig(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn sniff(s: &str) -> Cell {
        if let Ok(i) = s.parse::<i64>() {
            return Cell::Int(i);
        }
        if let Ok(x) = s.parse::<f64>() {
            return Cell::Num(x);
        }
        Cell::Text(s.to_string())
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Cell {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Cell {
        Cell::Int(i64::from(v))
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Text(v)
    }
}

/// Render a float with at least six significant digits, losslessly.
///
/// Values of readable magnitude whose shortest round-trip form already
/// carries six digits keep that form (with a decimal point, so the cell
/// never reads back as an integer). Everything else uses scientific
/// notation: the shortest exponent form when it has six digits, otherwise
/// padded to six. Padding cannot lose precision: a value whose shortest
/// form has fewer digits is within a relative 1e-16 of that short decimal,
/// so the correctly rounded six-digit decimal is the same number with
/// zeros appended.
pub fn format_sig(v: f64) -> String {
    let plain = format!("{v:?}");
    if sig_digits(&plain) >= 6 && (1e-4..1e16).contains(&v.abs()) && !plain.contains('e') {
        return plain;
    }
    let sci = format!("{v:e}");
    if sig_digits(&sci) >= 6 {
        sci
    } else {
        format!("{v:.5e}")
    }
}

fn sig_digits(rendered: &str) -> usize {
    let mantissa = rendered.split(['e', 'E']).next().unwrap_or(rendered);
    mantissa
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count()
}

/// A rectangular table with ordered meta headers.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    meta: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl OutputTable {
    pub fn new<I, S>(columns: I) -> OutputTable
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        OutputTable {
            meta: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Attach a `key = value` header line. Order is preserved. Keys must
    /// not contain `=` and values must be single-line; both are emitted
    /// trimmed, so they parse back exactly.
    pub fn push_meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta
            .push((key.trim().to_string(), value.to_string().trim().to_string()));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row arity must match the column count"
        );
        self.rows.push(row);
    }

    pub fn meta(&self) -> &[(String, String)] {
        &self.meta
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            writeln!(out, "# {k} = {v}").expect("string sink");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("vec sink");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .expect("vec sink");
        }
        let body = w.into_inner().expect("vec sink");
        out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
        out
    }

    pub fn from_csv(text: &str) -> Result<OutputTable> {
        let mut meta = Vec::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix('#') {
                meta.push(parse_meta_line(rest)?);
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(body.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| Error::Table(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Table(e.to_string()))?;
            rows.push(record.iter().map(Cell::sniff).collect());
        }
        Ok(OutputTable {
            meta,
            columns,
            rows,
        })
    }

    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            writeln!(out, "# {k} = {v}").expect("string sink");
        }
        for row in &self.rows {
            out.push('\n');
            for (col, cell) in self.columns.iter().zip(row) {
                writeln!(out, "{col} = {}", cell.render()).expect("string sink");
            }
        }
        out
    }

    pub fn from_records(text: &str) -> Result<OutputTable> {
        let mut meta = Vec::new();
        let mut blocks: Vec<Vec<(String, String)>> = Vec::new();
        let mut open = false;
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix('#') {
                meta.push(parse_meta_line(rest)?);
                open = false;
            } else if line.trim().is_empty() {
                open = false;
            } else {
                if !open {
                    blocks.push(Vec::new());
                    open = true;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| Error::Table(format!("record line without `=`: `{line}`")))?;
                blocks
                    .last_mut()
                    .expect("a block was just opened")
                    .push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        let columns: Vec<String> = match blocks.first() {
            Some(block) => block.iter().map(|(k, _)| k.clone()).collect(),
            None => Vec::new(),
        };
        let mut rows = Vec::new();
        for block in &blocks {
            let keys: Vec<&String> = block.iter().map(|(k, _)| k).collect();
            if !keys
                .iter()
                .map(|k| k.as_str())
                .eq(columns.iter().map(String::as_str))
            {
                return Err(Error::Table(format!(
                    "record block keys {keys:?} do not match the first block {columns:?}"
                )));
            }
            rows.push(block.iter().map(|(_, v)| Cell::sniff(v)).collect());
        }
        Ok(OutputTable {
            meta,
            columns,
            rows,
        })
    }
}

fn parse_meta_line(rest: &str) -> Result<(String, String)> {
    let (k, v) = rest
        .split_once('=')
        .ok_or_else(|| Error::Table(format!("meta line without `=`: `#{rest}`")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}
