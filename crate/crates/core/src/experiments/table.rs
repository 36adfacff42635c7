//! Result tables and their CSV / JSON forms.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::Config;
use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Value {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Value {
        Value::Num(v as f64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Value {
        Value::Num(if v { 1.0 } else { 0.0 })
    }
}

impl From<String> for Value {
    fn from(v: String) -> Value {
        Value::Text(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Value {
        Value::Text(v.to_string())
    }
}

impl Value {
    pub fn num(&self) -> Option<f64> {
        match self {
            Value::Num(v) => Some(*v),
            Value::Text(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub version: String,
    pub subcommand: String,
    pub seed: u64,
    /// Effective configuration, every key included.
    pub config: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

/// 17 significant digits: enough for an exact f64 round trip.
fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl ResultTable {
    pub fn new(subcommand: &str, seed: u64, config: &Config, columns: &[&str]) -> ResultTable {
        ResultTable {
            version: VERSION.to_string(),
            subcommand: subcommand.to_string(),
            seed,
            config: config.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match columns");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        let i = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i].num().unwrap_or(f64::NAN)).collect()
    }

    fn types(&self) -> Vec<&'static str> {
        (0..self.columns.len())
            .map(|i| if self.rows.iter().any(|r| matches!(r[i], Value::Text(_))) { "text" } else { "num" })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# xxchain {}", self.version).unwrap();
        writeln!(s, "# subcommand: {}", self.subcommand).unwrap();
        writeln!(s, "# seed: {}", self.seed).unwrap();
        for (k, v) in &self.config {
            writeln!(s, "# config: {k} = {v}").unwrap();
        }
        writeln!(s, "# types: {}", self.types().join(",")).unwrap();
        s.push_str(&self.columns.join(","));
        s.push('\n');
        s.push_str(&self.csv_body());
        s
    }

    /// Data rows only, without header lines.
    pub fn csv_body(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|v| match v {
                    Value::Num(x) => fmt_num(*x),
                    Value::Text(t) => quote(t),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(),
        }
    }

    /// Write to `path`; empty tables are rejected before touching the file.
    pub fn emit(&self, path: &Path, format: Format) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::Grid("empty result table".into()));
        }
        let text = self.render(format)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<ResultTable> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_csv(text: &str) -> Result<ResultTable> {
        let mut version = None;
        let mut subcommand = None;
        let mut seed = None;
        let mut config = Vec::new();
        let mut types: Option<Vec<String>> = None;
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            if let Some(h) = line.strip_prefix("# ") {
                if let Some(v) = h.strip_prefix("xxchain ") {
                    version = Some(v.to_string());
                } else if let Some(v) = h.strip_prefix("subcommand: ") {
                    subcommand = Some(v.to_string());
                } else if let Some(v) = h.strip_prefix("seed: ") {
                    seed = Some(v.parse::<u64>().map_err(|e| Error::TableParse(e.to_string()))?);
                } else if let Some(v) = h.strip_prefix("config: ") {
                    let (k, val) = v.split_once(" = ").ok_or_else(|| Error::TableParse(format!("bad config line {v}")))?;
                    config.push((k.to_string(), val.to_string()));
                } else if let Some(v) = h.strip_prefix("types: ") {
                    types = Some(v.split(',').map(|s| s.to_string()).collect());
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let cells = split_csv(line)?;
            match &columns {
                None => columns = Some(cells),
                Some(cols) => {
                    if cells.len() != cols.len() {
                        return Err(Error::TableParse(format!("row width {} vs {} columns", cells.len(), cols.len())));
                    }
                    let ty = types.as_ref().ok_or_else(|| Error::TableParse("missing types line".into()))?;
                    let row = cells
                        .into_iter()
                        .zip(ty)
                        .map(|(c, t)| {
                            if t == "num" {
                                c.parse::<f64>().map(Value::Num).map_err(|e| Error::TableParse(format!("{c}: {e}")))
                            } else {
                                Ok(Value::Text(c))
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    rows.push(row);
                }
            }
        }
        Ok(ResultTable {
            version: version.ok_or_else(|| Error::TableParse("missing version".into()))?,
            subcommand: subcommand.ok_or_else(|| Error::TableParse("missing subcommand".into()))?,
            seed: seed.ok_or_else(|| Error::TableParse("missing seed".into()))?,
            config,
            columns: columns.ok_or_else(|| Error::TableParse("missing column line".into()))?,
            rows,
        })
    }
}

fn split_csv(line: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', false) if cur.is_empty() => quoted = true,
            ('"', true) => {
                if chars.peek() == Some(&'"') {
                    cur.push('"');
                    chars.next();
                } else {
                    quoted = false;
                }
            }
            (',', false) => out.push(std::mem::take(&mut cur)),
            (c, _) => cur.push(c),
        }
    }
    if quoted {
        return Err(Error::TableParse("unterminated quote".into()));
    }
    out.push(cur);
    Ok(out)
}
