//! Rendering of command results as JSON, CSV or plain text.

use clap::ValueEnum;
use num_rational::BigRational;
use serde_json::{Map, Value};
use std::io::{self, Write};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

pub type Row = Vec<(String, Value)>;

pub enum Output {
    /// A single value, printed bare.
    Scalar(Value),
    Record(Row),
    Table(Vec<Row>),
    /// Pre-rendered JSON plus a tabular summary for the other formats.
    Report(String, Vec<Row>),
}

impl Output {
    pub fn record<const N: usize>(fields: [(&str, Value); N]) -> Self {
        Output::Record(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn write(&self, format: Format) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Json => {
                let text = match self {
                    Output::Scalar(v) => v.to_string(),
                    Output::Record(row) => Value::Object(object(row)).to_string(),
                    Output::Table(rows) => {
                        Value::Array(rows.iter().map(|r| Value::Object(object(r))).collect()).to_string()
                    }
                    Output::Report(json, _) => json.clone(),
                };
                writeln!(out, "{text}")
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                match self {
                    Output::Scalar(v) => {
                        w.write_record(["value"])?;
                        w.write_record([cell(v)])?;
                    }
                    Output::Record(row) => write_csv_rows(&mut w, std::slice::from_ref(row))?,
                    Output::Table(rows) | Output::Report(_, rows) => write_csv_rows(&mut w, rows)?,
                }
                w.flush()
            }
            Format::Plain => match self {
                Output::Scalar(v) => writeln!(out, "{}", cell(v)),
                Output::Record(row) => {
                    for (k, v) in row {
                        writeln!(out, "{k}: {}", cell(v))?;
                    }
                    Ok(())
                }
                Output::Table(rows) | Output::Report(_, rows) => {
                    if let Some(first) = rows.first() {
                        let header: Vec<&str> = first.iter().map(|(k, _)| k.as_str()).collect();
                        writeln!(out, "{}", header.join("\t"))?;
                    }
                    for row in rows {
                        let cells: Vec<String> = row.iter().map(|(_, v)| cell(v)).collect();
                        writeln!(out, "{}", cells.join("\t"))?;
                    }
                    Ok(())
                }
            },
        }
    }
}

fn object(row: &Row) -> Map<String, Value> {
    row.iter().cloned().collect()
}

fn write_csv_rows<W: Write>(w: &mut csv::Writer<W>, rows: &[Row]) -> io::Result<()> {
    let Some(first) = rows.first() else {
        return Ok(());
    };
    w.write_record(first.iter().map(|(k, _)| k.as_str()))?;
    for row in rows {
        w.write_record(row.iter().map(|(_, v)| cell(v)))?;
    }
    Ok(())
}

/// Strings unquoted, null empty, everything else as compact JSON.
fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `num`/`den` fields of an exact rational, with an optional prefix.
pub fn rational_fields(prefix: &str, q: &BigRational) -> Row {
    let (num, den) = lambda_roots::exact::to_strings(q);
    let key = |s: &str| if prefix.is_empty() { s.to_string() } else { format!("{prefix}_{s}") };
    vec![(key("num"), Value::String(num)), (key("den"), Value::String(den))]
}
