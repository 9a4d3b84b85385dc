//! Rendering of command results as aligned tables, CSV or a JSON envelope.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// Two-column `field, value` table.
    pub fn fields(name: &str, pairs: Vec<(&str, Cell)>) -> Self {
        let mut t = Self::new(name, &["field", "value"]);
        for (k, v) in pairs {
            t.row(vec![k.into(), v]);
        }
        t
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: BTreeMap<String, String>,
    pub result: Value,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, params: BTreeMap<String, String>, result: Value) -> Self {
        Self {
            command,
            params,
            result,
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_json(&self) -> String {
        #[derive(Serialize)]
        struct Envelope<'a> {
            command: &'a str,
            params: &'a BTreeMap<String, String>,
            result: &'a Value,
        }
        let mut s = serde_json::to_string_pretty(&Envelope {
            command: self.command,
            params: &self.params,
            result: &self.result,
        })
        .expect("values serialise");
        s.push('\n');
        s
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "# {}", t.name);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.columns).expect("in-memory write");
            for row in &t.rows {
                w.write_record(row.iter().map(full_precision))
                    .expect("in-memory write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        }
        for n in &self.notes {
            let _ = writeln!(out, "# note: {n}");
        }
        out
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            let cells: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| r.iter().map(six_digits).collect())
                .collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|c| {
                    cells
                        .iter()
                        .map(|r| r[c].chars().count())
                        .chain(std::iter::once(t.columns[c].chars().count()))
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let _ = writeln!(out, "{}", t.name);
            let line = |vals: &[String]| {
                vals.iter()
                    .zip(&widths)
                    .map(|(v, w)| format!("{v:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(out, "{}", line(&t.columns));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        out
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn full_precision(c: &Cell) -> String {
    match c {
        Cell::Text(s) => s.clone(),
        Cell::Num(x) => {
            let a = x.abs();
            if *x != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
                format!("{x:e}")
            } else {
                format!("{x}")
            }
        }
    }
}

/// Six significant digits.
pub fn six_digits(c: &Cell) -> String {
    match c {
        Cell::Text(s) => s.clone(),
        Cell::Num(x) => sig6(*x),
    }
}

pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// Flag-name → value map from a serialisable argument struct, so that
/// `--key=value` for every entry reproduces the run.
pub fn echo<T: Serialize>(args: &T) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    if let Ok(Value::Object(obj)) = serde_json::to_value(args) {
        for (k, v) in obj {
            let text = match v {
                Value::Null => continue,
                Value::String(s) => s,
                Value::Array(items) => items
                    .iter()
                    .map(|i| match i {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(","),
                other => other.to_string(),
            };
            map.insert(k.replace('_', "-"), text);
        }
    }
    map
}
