//! Summaries and data tables.
//!
//! A summary is `{schema, experiment, params, metrics}`; each metric passes
//! when `|estimate - target| <= tolerance`. Tables are written as CSV with
//! `.` decimals, `,` separators and LF line endings.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub estimate: f64,
    pub stderr: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Metric {
    /// Passes when `|estimate - target| <= tolerance`.
    pub fn within(name: impl Into<String>, estimate: f64, target: f64, tolerance: f64) -> Self {
        Self::build(name.into(), estimate, 0.0, target, tolerance)
    }

    /// Tolerance of three standard errors.
    pub fn sigma3(name: impl Into<String>, estimate: f64, stderr: f64, target: f64) -> Self {
        Self::build(name.into(), estimate, stderr, target, 3.0 * stderr)
    }

    /// Tolerance `rel |target|`.
    pub fn relative(name: impl Into<String>, estimate: f64, target: f64, rel: f64) -> Self {
        Self::build(name.into(), estimate, 0.0, target, rel * target.abs())
    }

    /// A yes/no check, reported as 1 or 0 against a target of 1.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::build(name.into(), if ok { 1.0 } else { 0.0 }, 0.0, 1.0, 0.0)
    }

    pub fn with_stderr(mut self, stderr: f64) -> Self {
        self.stderr = stderr;
        self
    }

    fn build(name: String, estimate: f64, stderr: f64, target: f64, tolerance: f64) -> Self {
        let pass =
            estimate.is_finite() && tolerance.is_finite() && (estimate - target).abs() <= tolerance;
        Self {
            name,
            estimate,
            stderr,
            target,
            tolerance,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub metrics: Vec<Metric>,
}

impl Report {
    pub fn new(experiment: &str, params: BTreeMap<String, Value>) -> Self {
        Self {
            schema: SCHEMA,
            experiment: experiment.to_owned(),
            params,
            metrics: Vec::new(),
        }
    }

    pub fn push(&mut self, m: Metric) {
        self.metrics.push(m);
    }

    pub fn passed(&self) -> bool {
        !self.metrics.is_empty() && self.metrics.iter().all(|m| m.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Metric> {
        self.metrics.iter().filter(|m| !m.pass)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Serialized parameters as a sorted map.
pub fn params_of<T: Serialize>(args: &T) -> BTreeMap<String, Value> {
    match serde_json::to_value(args) {
        Ok(Value::Object(map)) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    }
}

/// Numeric table with named columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
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
        Cell::Num(x as f64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Integers as integers, everything else in shortest round-trip scientific
/// notation, so that the text depends only on the value.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:e}")
    }
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(x) => format_number(*x),
                Cell::Text(s) => s.clone(),
            }))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// What an experiment hands back.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub table: Table,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_tolerance_flips_pass() {
        assert!(Metric::within("a", 1.0, 1.05, 0.1).pass);
        assert!(!Metric::within("a", 1.0, 1.2, 0.1).pass);
        assert!(!Metric::sigma3("b", f64::NAN, 1.0, 0.0).pass);
        assert!(Metric::holds("c", true).pass && !Metric::holds("c", false).pass);
    }

    #[test]
    fn report_round_trips() {
        let mut params = BTreeMap::new();
        params.insert("runs".into(), Value::from(3));
        let mut r = Report::new("demo", params);
        r.push(Metric::relative("x", 0.1 + 0.2, 0.3, 1e-12));
        let back: Report = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.schema, 1);
        assert!(back.passed());
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["m", "p"]);
        t.push(vec![0usize.into(), 0.25.into()]);
        t.push(vec![1usize.into(), (1.0 / 3.0).into()]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "m,p\n0,2.5e-1\n1,3.333333333333333e-1\n"
        );
    }
}
