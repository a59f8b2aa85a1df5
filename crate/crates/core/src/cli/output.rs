use clap::ValueEnum;
use serde::Deserialize;
use serde_json::{json, Map, Number, Value};

/// Version of the JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Floats are written with 17 significant digits so that output files are
/// byte-stable and round-trip exactly.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// A JSON number carrying exactly the text of [`format_float`]; non-finite
/// values become `null`.
pub fn json_float(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let n: Number = serde_json::from_str(&format_float(v)).expect("formatted float is valid JSON");
    Value::Number(n)
}

pub fn json_floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| json_float(x)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Num(v) => json_float(*v),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Overall verdict of a job.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub pass: bool,
    pub max_residual: Option<f64>,
    pub tolerance: Option<f64>,
}

impl Summary {
    pub fn informational() -> Self {
        Summary { pass: true, max_residual: None, tolerance: None }
    }

    /// Passes iff `max_residual < tolerance` (a NaN residual fails).
    pub fn residual(max_residual: f64, tolerance: f64) -> Self {
        Summary {
            pass: max_residual < tolerance,
            max_residual: Some(max_residual),
            tolerance: Some(tolerance),
        }
    }

    pub fn line(&self) -> String {
        let opt = |v: Option<f64>| v.map(format_float).unwrap_or_else(|| "-".into());
        format!(
            "pass={} max_residual={} tolerance={}",
            self.pass,
            opt(self.max_residual),
            opt(self.tolerance)
        )
    }
}

/// A table of records plus the job description that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub meta: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            meta: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Summary::informational(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text)).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    fn to_json(&self) -> Vec<u8> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.clone(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let summary = json!({
            "pass": self.summary.pass,
            "max_residual": self.summary.max_residual.map_or(Value::Null, json_float),
            "tolerance": self.summary.tolerance.map_or(Value::Null, json_float),
        });
        let doc = json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "meta": self.meta,
            "columns": self.columns,
            "records": records,
            "summary": summary,
        });
        let mut out = serde_json::to_vec_pretty(&doc).expect("JSON values serialize");
        out.push(b'\n');
        out
    }
}
