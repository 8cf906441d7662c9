//! The emitted document and its json, csv and text renderings.

use crate::qdiff::{Check, Status};
use crate::symbolic::{Mat, SeriesOperator};
use serde::Serialize;
use serde_json::{Map, Value};
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub command: String,
    pub n: Option<usize>,
    pub k: Option<u32>,
    #[serde(rename = "D")]
    pub d: Option<u32>,
    pub toggles: Map<String, Value>,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Degree {
    pub d: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl From<&Check> for CheckRecord {
    fn from(c: &Check) -> Self {
        CheckRecord { name: c.name.clone(), params: c.params.clone(), status: c.status, witness: c.witness.clone() }
    }
}

/// Output of one run. Command-specific data goes in `extra`, serialized after the common keys.
#[derive(Clone, Debug, Serialize)]
pub struct Document {
    pub meta: Meta,
    pub degrees: Vec<Degree>,
    pub checks: Vec<CheckRecord>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl Document {
    pub fn new(meta: Meta) -> Self {
        Document { meta, degrees: Vec::new(), checks: Vec::new(), extra: Map::new() }
    }

    pub fn push_matrix(&mut self, d: usize, m: &Mat) {
        let matrix = m.rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
        self.degrees.push(Degree { d, matrix });
    }

    pub fn push_series(&mut self, s: &SeriesOperator) {
        for d in 0..=s.order() {
            self.push_matrix(d, s.coeff(d));
        }
    }

    pub fn push_checks<'a>(&mut self, checks: impl IntoIterator<Item = &'a Check>) {
        self.checks.extend(checks.into_iter().map(CheckRecord::from));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("document serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut out = String::from("kind,name,d,i,j,value\n");
        for deg in &self.degrees {
            for (i, row) in deg.matrix.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    let _ = writeln!(out, "entry,,{},{},{},{}", deg.d, i + 1, j + 1, quote(e));
                }
            }
        }
        for c in &self.checks {
            let status = if c.status == Status::Pass { "pass" } else { "fail" };
            let value = match &c.witness {
                Some(w) => format!("{status}: {w}"),
                None => status.to_string(),
            };
            let _ = writeln!(out, "check,{},,,,{}", quote(&format!("{} {}", c.name, c.params)), quote(&value));
        }
        for (key, v) in &self.extra {
            let _ = writeln!(out, "{},,,,,{}", quote(key), quote(&flat(v)));
        }
        out
    }

    fn text(&self) -> String {
        let m = &self.meta;
        let mut out = m.command.to_string();
        for (label, v) in [("n", m.n.map(|x| x as u64)), ("k", m.k.map(u64::from)), ("D", m.d.map(u64::from))] {
            if let Some(v) = v {
                let _ = write!(out, " {label}={v}");
            }
        }
        for (key, v) in &m.toggles {
            let _ = write!(out, " {key}={}", flat(v));
        }
        out.push('\n');
        for deg in &self.degrees {
            let _ = writeln!(out, "z^{}:", deg.d);
            for (i, row) in deg.matrix.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    let _ = writeln!(out, "  [{},{}] {e}", i + 1, j + 1);
                }
            }
        }
        for (key, v) in &self.extra {
            let _ = writeln!(out, "{key}:");
            match v {
                Value::Array(items) => {
                    for item in items {
                        let _ = writeln!(out, "  {}", flat(item));
                    }
                }
                other => {
                    let _ = writeln!(out, "  {}", flat(other));
                }
            }
        }
        for c in &self.checks {
            let status = if c.status == Status::Pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {} {}", c.name, c.params);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "  witness: {w}");
            }
        }
        out
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
