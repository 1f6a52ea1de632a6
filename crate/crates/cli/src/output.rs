use crate::args::Format;
use crate::input::Failure;
use devils_staircase::interval::Interval;
use devils_staircase::Enclosure;
use serde_json::{json, Value};

/// CSV rows with a header and optional `#` comment lines at the end.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<String>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), ..Table::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn to_bytes(&self) -> Result<Vec<u8>, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let mut out = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
        for line in &self.footer {
            out.extend_from_slice(format!("# {line}\n").as_bytes());
        }
        Ok(out)
    }
}

fn io(e: csv::Error) -> Failure {
    Failure::Io(e.to_string())
}

/// Renders in `format`, building only the representation that is needed.
pub fn emit(
    format: Option<Format>,
    default: Format,
    json: impl FnOnce() -> Value,
    table: impl FnOnce() -> Table,
) -> Result<Vec<u8>, Failure> {
    match format.unwrap_or(default) {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&json()).map_err(|e| Failure::Io(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => table().to_bytes(),
    }
}

pub fn enclosure(e: &Enclosure, digits: usize) -> Value {
    let (lo, hi) = e.to_decimal_pair(digits);
    json!({ "lo": lo, "hi": hi })
}

pub fn interval(i: &Interval) -> Value {
    json!({ "lo": finite(i.lo), "hi": finite(i.hi) })
}

pub fn opt_interval(i: &Option<Interval>) -> Value {
    i.as_ref().map_or(Value::Null, interval)
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Shortest decimal that reads back as the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn interval_cells(i: &Option<Interval>) -> [String; 2] {
    match i {
        Some(i) => [num(i.lo), num(i.hi)],
        None => [String::new(), String::new()],
    }
}
