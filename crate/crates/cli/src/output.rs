//! CSV emission with a `#` metadata block.

use std::path::{Path, PathBuf};

use crate::config::CliError;

pub const OUTPUT_DIR_VAR: &str = "IONPHOT_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Human-readable lines printed to stderr.
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl std::fmt::Display) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn meta_num(&mut self, key: impl Into<String>, value: f64) {
        self.metadata.push((key.into(), format_number(value)));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        for (k, v) in &self.metadata {
            buf.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
        }
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(&self.columns).map_err(io)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::render)).map_err(io)?;
            }
            w.flush().map_err(|e| CliError::Io(e.to_string()))?;
        }
        Ok(buf)
    }
}

/// Nine significant digits; plain decimals for exponents in `[-5, 9)`,
/// scientific notation otherwise.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Output path: explicit, else `$IONPHOT_OUTPUT_DIR/<name>.csv`, else stdout.
pub fn destination(explicit: Option<&Path>, name: &str) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    std::env::var_os(OUTPUT_DIR_VAR)
        .filter(|d| !d.is_empty())
        .map(|d| PathBuf::from(d).join(format!("{name}.csv")))
}

pub fn write(report: &Report, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = report.render()?;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}
