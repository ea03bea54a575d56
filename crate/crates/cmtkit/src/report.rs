//! Serializable result records and CSV rendering.
//!
//! Every CSV starts with `#`-prefixed lines naming the generator, its
//! parameters and the columns, followed by a plain header row.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use serde_json::Value;

/// Outcome of a randomized bound check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: String,
    pub params: BTreeMap<String, Value>,
    pub samples: usize,
    /// Smallest observed `E − bound`.
    pub min_margin: f64,
    pub violations: usize,
    pub seed: u64,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Renders reports as one CSV row each.
pub fn reports_to_csv(reports: &[BoundReport], header: &[(&str, String)]) -> String {
    let mut table = BoundTable::new(
        "verify",
        [
            "theorem",
            "params",
            "samples",
            "min_margin",
            "violations",
            "seed",
        ],
    );
    for (k, v) in header {
        table = table.param(k, v);
    }
    for r in reports {
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", compact(v)))
            .collect::<Vec<_>>()
            .join(";");
        table.push(vec![
            Cell::text(&r.theorem),
            Cell::Text(params),
            Cell::Int(r.samples as i64),
            Cell::Num(r.min_margin),
            Cell::Int(r.violations as i64),
            Cell::Int(r.seed as i64),
        ]);
    }
    table.to_csv()
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(compact).collect::<Vec<_>>().join("|"),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn text(s: &str) -> Self {
        Cell::Text(s.to_string())
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) => s.serialize_f64(*x),
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Empty => s.serialize_none(),
        }
    }
}

/// Named columns of values plus generating parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTable {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl BoundTable {
    pub fn new<I, S>(name: &str, columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            name: name.to_string(),
            params: Vec::new(),
            notes: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column by name.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(format!("# {} {}", self.name, params).trim_end());
        out.push('\n');
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        out.push_str(&format!("# columns: {}\n", self.columns.join(",")));
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
        out
    }

    /// `{name, params, notes, rows: [{column: value}]}`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.clone(), serde_json::to_value(v).expect("cell serializes")))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({
            "name": self.name,
            "params": self.params.iter().cloned().collect::<BTreeMap<_, _>>(),
            "notes": self.notes,
            "rows": rows,
        })
    }
}
