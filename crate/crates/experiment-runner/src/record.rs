use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{io_err, Result, RunnerError};

/// A single table cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Value {
    /// Reads a cell written by [`Value`]'s `Display`. Floats always carry a
    /// `.`, an exponent or a non-finite marker, so they never come back as
    /// integers.
    pub fn parse(cell: &str) -> Value {
        match cell {
            "true" => return Value::Bool(true),
            "false" => return Value::Bool(false),
            "NaN" | "inf" | "-inf" => return Value::Float(cell.parse().expect("non-finite literal")),
            _ => {}
        }
        let numeric = cell.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+');
        if numeric {
            if !cell.contains(['.', 'e', 'E']) {
                if let Ok(i) = cell.parse() {
                    return Value::Int(i);
                }
            } else if let Ok(x) = cell.parse() {
                return Value::Float(x);
            }
        }
        Value::Text(cell.to_string())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            // Debug formatting is the shortest string that parses back to
            // the same f64, and keeps a trailing `.0` on whole numbers.
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Text(s) => f.write_str(s),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Self {
        Value::Int(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

pub type Fields = Vec<(String, Value)>;

/// One row of results.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub config_hash: String,
    /// Table this record belongs to.
    pub metric: String,
    /// Sweep point that produced the record; one point may emit several.
    pub point: usize,
    pub inputs: Fields,
    pub measured: Fields,
    pub predicted: Fields,
    /// Invariant name and verdict.
    pub checks: Vec<(String, bool)>,
    /// Seconds spent on the point. Kept out of the CSV tables so those
    /// stay byte-identical between runs.
    pub wall_time: f64,
}

impl ResultRecord {
    pub fn new(metric: &str, point: usize) -> Self {
        Self {
            config_hash: String::new(),
            metric: metric.to_string(),
            point,
            inputs: Vec::new(),
            measured: Vec::new(),
            predicted: Vec::new(),
            checks: Vec::new(),
            wall_time: 0.0,
        }
    }

    pub fn input(mut self, name: &str, v: impl Into<Value>) -> Self {
        self.inputs.push((name.to_string(), v.into()));
        self
    }

    pub fn measure(mut self, name: &str, v: impl Into<Value>) -> Self {
        self.measured.push((name.to_string(), v.into()));
        self
    }

    pub fn predict(mut self, name: &str, v: impl Into<Value>) -> Self {
        self.predicted.push((name.to_string(), v.into()));
        self
    }

    pub fn check(mut self, name: &str, ok: bool) -> Self {
        self.checks.push((name.to_string(), ok));
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.inputs.iter().chain(&self.measured).chain(&self.predicted).find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn check_value(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(k, _)| k == name).map(|(_, ok)| *ok)
    }

    /// The row as it appears in a table: hash, point, inputs, measured,
    /// predicted, then one `pass_<name>` column per check.
    pub fn columns(&self) -> Fields {
        let mut out = vec![
            ("config_hash".to_string(), Value::Text(self.config_hash.clone())),
            ("point".to_string(), Value::from(self.point)),
        ];
        out.extend(self.inputs.iter().cloned());
        out.extend(self.measured.iter().cloned());
        out.extend(self.predicted.iter().cloned());
        out.extend(self.checks.iter().map(|(k, ok)| (format!("pass_{k}"), Value::Bool(*ok))));
        out
    }
}

/// One table: a metric name, its header and its rows in record order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub metric: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<Value>>>,
}

impl Table {
    pub fn file_name(&self) -> String {
        format!("{}.csv", self.metric)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.as_ref().map_or(String::new(), |v| v.to_string())))?;
        }
        let bytes = w.into_inner().map_err(|e| RunnerError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("cells are valid UTF-8"))
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Row `i` as name/value pairs, skipping empty cells.
    pub fn row_fields(&self, i: usize) -> Fields {
        self.header
            .iter()
            .zip(&self.rows[i])
            .filter_map(|(h, c)| c.clone().map(|v| (h.clone(), v)))
            .collect()
    }
}

/// Groups records into one table per metric, in order of first
/// appearance. A table's header is the hash and point columns, then the
/// union of input, measured, predicted and check columns, each group in
/// first-seen order. Cells a record does not have stay empty.
pub fn emit_tables(records: &[ResultRecord]) -> Vec<Table> {
    let mut metrics: Vec<&str> = Vec::new();
    for r in records {
        if !metrics.contains(&r.metric.as_str()) {
            metrics.push(&r.metric);
        }
    }
    metrics
        .into_iter()
        .map(|metric| {
            let mine: Vec<&ResultRecord> = records.iter().filter(|r| r.metric == metric).collect();
            let mut header = vec!["config_hash".to_string(), "point".to_string()];
            let groups: [fn(&ResultRecord) -> Vec<String>; 4] = [
                |r| r.inputs.iter().map(|(k, _)| k.clone()).collect(),
                |r| r.measured.iter().map(|(k, _)| k.clone()).collect(),
                |r| r.predicted.iter().map(|(k, _)| k.clone()).collect(),
                |r| r.checks.iter().map(|(k, _)| format!("pass_{k}")).collect(),
            ];
            for names in groups {
                for r in &mine {
                    for name in names(r) {
                        if !header.contains(&name) {
                            header.push(name);
                        }
                    }
                }
            }
            let rows = mine
                .iter()
                .map(|r| {
                    let mut row = vec![None; header.len()];
                    for (name, v) in r.columns() {
                        let j = header.iter().position(|h| *h == name).expect("header holds every column");
                        row[j] = Some(v);
                    }
                    row
                })
                .collect();
            Table { metric: metric.to_string(), header, rows }
        })
        .collect()
}

/// Reads a table written by [`Table::to_csv`].
pub fn parse_table(metric: &str, text: &str) -> Result<Table> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        rows.push(rec.iter().map(|c| (!c.is_empty()).then(|| Value::parse(c))).collect());
    }
    Ok(Table { metric: metric.to_string(), header, rows })
}

pub fn read_table(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let metric = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
    parse_table(metric, &text)
}
