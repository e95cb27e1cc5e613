//! Flat report rows and their JSON, CSV and plain-text renderings.

use std::fmt;

use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(i64),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(x) => write!(f, "{x}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x.into())
    }
}

impl From<i8> for Cell {
    fn from(x: i8) -> Self {
        Cell::Int(x.into())
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        // counts past i64 would be a bug upstream; keep them lossless anyway
        i64::try_from(x).map(Cell::Int).unwrap_or_else(|_| Cell::Text(x.to_string()))
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Big integers always go out as decimal strings.
impl From<&num_bigint::BigInt> for Cell {
    fn from(x: &num_bigint::BigInt) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<&num_bigint::BigUint> for Cell {
    fn from(x: &num_bigint::BigUint) -> Self {
        Cell::Text(x.to_string())
    }
}

/// One report row: column names in emission order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record(pub Vec<(&'static str, Cell)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    fn header(&self) -> Vec<&'static str> {
        self.0.iter().map(|(k, _)| *k).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

pub fn render(records: &[Record], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(to_json(records)),
        Format::Csv => to_csv(records),
        Format::Plain => Ok(to_plain(records)),
    }
}

fn to_json(records: &[Record]) -> String {
    let rows: Vec<Value> = records
        .iter()
        .map(|r| {
            let obj: Map<String, Value> =
                r.0.iter()
                    .map(|(k, v)| {
                        let v = match v {
                            Cell::Int(x) => Value::from(*x),
                            Cell::Bool(b) => Value::from(*b),
                            Cell::Text(s) => Value::from(s.as_str()),
                        };
                        (k.to_string(), v)
                    })
                    .collect();
            Value::Object(obj)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("plain values always serialize");
    s.push('\n');
    s
}

/// Rows with differing column sets get a header line each time the set
/// changes.
fn to_csv(records: &[Record]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let mut last: Option<Vec<&str>> = None;
    for r in records {
        let header = r.header();
        if last.as_ref() != Some(&header) {
            w.write_record(&header)?;
            last = Some(header);
        }
        w.write_record(r.0.iter().map(|(_, v)| v.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is built from strings"))
}

fn to_plain(records: &[Record]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < records.len() {
        let header = records[i].header();
        let mut j = i;
        while j < records.len() && records[j].header() == header {
            j += 1;
        }
        let cells: Vec<Vec<String>> =
            records[i..j].iter().map(|r| r.0.iter().map(|(_, v)| v.to_string()).collect()).collect();
        let widths: Vec<usize> = header
            .iter()
            .enumerate()
            .map(|(c, h)| cells.iter().map(|row| row[c].len()).chain([h.len()]).max().unwrap_or(0))
            .collect();
        let line = |row: Vec<&str>| {
            let padded: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        if i > 0 {
            out.push('\n');
        }
        out += &line(header.clone());
        out += &line(
            widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect(),
        );
        for row in &cells {
            out += &line(row.iter().map(String::as_str).collect());
        }
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<Record> {
        vec![
            Record::new().with("n", 0u32).with("det", "1").with("ok", true),
            Record::new().with("n", 1u32).with("det", "123456789012345678901234567890").with("ok", false),
        ]
    }

    #[test]
    fn json_keeps_column_order_and_big_strings() {
        let s = render(&rows(), Format::Json).unwrap();
        let n = s.find("\"n\"").unwrap();
        let det = s.find("\"det\"").unwrap();
        assert!(n < det);
        assert!(s.contains("\"123456789012345678901234567890\""));
    }

    #[test]
    fn csv_headers_once_per_shape() {
        let s = render(&rows(), Format::Csv).unwrap();
        assert_eq!(s, "n,det,ok\n0,1,true\n1,123456789012345678901234567890,false\n");
        let mixed = vec![Record::new().with("a", 1u32), Record::new().with("b", 2u32)];
        assert_eq!(render(&mixed, Format::Csv).unwrap(), "a\n1\nb\n2\n");
    }

    #[test]
    fn plain_is_aligned() {
        let s = render(&rows()[..1], Format::Plain).unwrap();
        assert_eq!(s, "n  det  ok\n-  ---  ----\n0  1    true\n");
    }
}
