//! Tabular reports with deterministic CSV and JSON rendering.

use std::fmt::Write as _;

use serde_json::{Map, Value as Json};

/// Significant digits of every emitted real number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style formatting with trailing zeros removed; `inf`, `-inf`,
/// `nan` for non-finite values.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= SIGNIFICANT_DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One report cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => csv_escape(s),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Num(x) if x.is_finite() => {
                let rounded: f64 = fmt_num(*x).parse().expect("formatted number parses");
                serde_json::Number::from_f64(rounded).map_or(Json::Null, Json::Number)
            }
            Cell::Num(x) => Json::String(fmt_num(*x)),
            Cell::Int(i) => Json::from(*i),
            Cell::Bool(b) => Json::Bool(*b),
            Cell::Text(s) => Json::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    cells: Vec<Cell>,
    formula: String,
}

/// A named table of rows, each tagged with the formula it exercises.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    command: String,
    params: Vec<(String, Cell)>,
    columns: Vec<String>,
    rows: Vec<Row>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            params: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.params.push((key.to_string(), value.into()));
        self
    }

    /// Appends a row; `formula` names the formula behind its numbers.
    pub fn push(&mut self, cells: Vec<Cell>, formula: &str) {
        assert_eq!(cells.len(), self.columns.len(), "row width must match the header");
        self.rows.push(Row {
            cells,
            formula: formula.to_string(),
        });
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn cell(&self, row: usize, column: &str) -> Option<&Cell> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.get(row).map(|r| &r.cells[j])
    }

    /// Distinct formulas in first-use order.
    pub fn formulas(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.formula) {
                out.push(r.formula.clone());
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| csv_escape(c)).collect();
        writeln!(s, "{}", header.join(",")).expect("write to string");
        for r in &self.rows {
            let cells: Vec<String> = r.cells.iter().map(Cell::csv).collect();
            writeln!(s, "{}", cells.join(",")).expect("write to string");
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut top = Map::new();
        top.insert("command".into(), Json::String(self.command.clone()));
        let params: Map<String, Json> = self.params.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        top.insert("params".into(), Json::Object(params));
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| {
                let mut obj: Map<String, Json> =
                    self.columns.iter().cloned().zip(r.cells.iter().map(Cell::json)).collect();
                obj.insert("paper_ref".into(), Json::String(r.formula.clone()));
                Json::Object(obj)
            })
            .collect();
        top.insert("rows".into(), Json::Array(rows));
        top.insert(
            "paper_refs".into(),
            Json::Array(self.formulas().into_iter().map(Json::String).collect()),
        );
        let mut out = serde_json::to_string_pretty(&Json::Object(top)).expect("JSON serialization");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_num(2.0 * std::f64::consts::PI / 5.0), "1.25663706144");
        assert_eq!(fmt_num(0.2612038749637414), "0.261203874964");
        assert_eq!(fmt_num(1.5e-7), "1.5e-07");
        assert_eq!(fmt_num(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_num(0.0001), "0.0001");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn csv_and_json() {
        let mut r = Report::new("demo", &["n", "value"]).param("n", 3usize);
        r.push(vec![3usize.into(), 0.5.into()], "f(n)");
        r.push(vec![4usize.into(), f64::INFINITY.into()], "f(n)");
        assert_eq!(r.to_csv(), "n,value\n3,0.5\n4,inf\n");
        let v: Json = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["command"], "demo");
        assert_eq!(v["rows"][0]["value"], 0.5);
        assert_eq!(v["rows"][1]["value"], "inf");
        assert_eq!(v["rows"][0]["paper_ref"], "f(n)");
        assert_eq!(v["paper_refs"].as_array().unwrap().len(), 1);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "params", "rows", "paper_refs"]);
    }
}
