use charvar::exactalg::IntPolynomial;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// First identity that did not hold, with both sides as strings.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

pub struct Report {
    pub command: &'static str,
    pub pass: bool,
    pub body: Value,
    pub failure: Option<Failure>,
    /// CSV header and rows.
    pub table: (Vec<&'static str>, Vec<Vec<String>>),
}

/// Coefficients in increasing degree, as decimal strings.
pub fn coefficients(p: &IntPolynomial) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

pub fn poly_json(p: &IntPolynomial) -> Value {
    json!({
        "degree": p.degree(),
        "coefficients": coefficients(p),
        "text": p.to_uv_string(),
    })
}

pub fn poly_rows(p: &IntPolynomial) -> Vec<Vec<String>> {
    p.coeffs().iter().enumerate().map(|(i, c)| vec![i.to_string(), c.to_string()]).collect()
}

impl Report {
    pub fn new(command: &'static str, body: Value) -> Self {
        Report { command, pass: true, body, failure: None, table: (Vec::new(), Vec::new()) }
    }

    pub fn with_poly(mut self, p: &IntPolynomial) -> Self {
        self.table = (vec!["degree", "coefficient"], poly_rows(p));
        self
    }

    pub fn with_table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = (header, rows);
        self
    }

    pub fn with_failure(mut self, failure: Option<Failure>) -> Self {
        self.pass = failure.is_none();
        self.failure = failure;
        self
    }

    pub fn error(e: &CliError) -> Self {
        let kind = match e {
            CliError::Usage(_) => "usage",
            CliError::Cap(_) => "cap_exceeded",
            CliError::Failure(_) => "failure",
        };
        let mut r = Report::new("error", json!({ "kind": kind, "message": e.to_string() }));
        r.pass = false;
        r.table = (vec!["kind", "message"], vec![vec![kind.into(), e.to_string()]]);
        r
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": self.command,
                    "pass": self.pass,
                    "first_failure": self.failure,
                    "result": self.body,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = self.table.0.join(",");
                s.push('\n');
                for row in &self.table.1 {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}
