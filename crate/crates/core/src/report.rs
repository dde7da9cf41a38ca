//! Output records and their text, JSON and CSV renderings.
//!
//! Exact numbers are always rendered as fraction strings. Floating values
//! are decimal strings, and every payload that carries them also records
//! the working precision in a `digits` field.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::approximant::ApproxRow;
use crate::error::{Error, Result};
use crate::exactfield::render_rational;
use crate::series::{CoeffTable, StirlingSeries};
use crate::verify::Check;

pub const SCHEMA_VERSION: &str = "1";

/// Significant digits used for error magnitudes.
const ERROR_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub payload: Value,
}

impl OutputRecord {
    pub fn new(command: &str, payload: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records are plain JSON")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad record: {e}")))
    }
}

/// A command result in all three shapes.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub record: OutputRecord,
    pub text: Vec<String>,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CommandOutput {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Text => Ok(self.text.iter().map(|l| format!("{l}\n")).collect()),
            Format::Json => Ok(self.record.to_json() + "\n"),
            Format::Csv => self.csv(),
        }
    }

    fn csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Always)
            .from_writer(Vec::new());
        w.write_record(&self.headers).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn format_error(x: f64) -> String {
    format!("{:.*e}", ERROR_DIGITS - 1, x)
}

/// `s` without a trailing `.0` for integers.
pub fn format_s(s: f64) -> String {
    format!("{s}")
}

pub fn coeffs_output(table: &CoeffTable) -> CommandOutput {
    let mut text = Vec::new();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (n, a) in table.as_slice().iter().enumerate() {
        let p = render_rational(a.rational_part());
        let q = render_rational(a.sqrt2_part());
        text.push(format!("a_{n} = {a}"));
        entries.push(json!({
            "index": n,
            "rational_part": p,
            "sqrt2_part": q,
            "canonical": a.to_string(),
        }));
        rows.push(vec![n.to_string(), p, q, a.to_string()]);
    }
    CommandOutput {
        record: OutputRecord::new(
            "coeffs",
            json!({ "max": table.max_index(), "coefficients": entries }),
        ),
        text,
        headers: vec!["index", "rational_part", "sqrt2_part", "canonical"],
        rows,
    }
}

pub fn stirling_output(series: &StirlingSeries) -> CommandOutput {
    let mut text = Vec::new();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (k, c) in series.as_slice().iter().enumerate() {
        let r = render_rational(c);
        text.push(format!("c_{k} = {r}"));
        entries.push(json!({ "index": k, "value": r }));
        rows.push(vec![k.to_string(), r]);
    }
    CommandOutput {
        record: OutputRecord::new(
            "stirling",
            json!({ "max": series.max_index(), "coefficients": entries }),
        ),
        text,
        headers: vec!["index", "value"],
        rows,
    }
}

pub fn approx_output(command: &str, rows_in: &[ApproxRow], digits: u32) -> CommandOutput {
    let sig = digits as usize;
    let mut text = Vec::new();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for r in rows_in {
        let s = format_s(r.s);
        let reference = r.reference.to_decimal_string(sig as u32);
        let exact = r.reference_exact.as_ref().map(|f| f.to_string());
        let approx = r.approx.to_decimal_string(sig as u32);
        let rel = format_error(r.rel_error);
        let scaled = format_error(r.scaled_error);
        text.push(format!(
            "s = {s}, n = {}: approx = {approx}, reference = {reference}, rel_error = {rel}, scaled_error = {scaled}",
            r.n
        ));
        entries.push(json!({
            "s": s,
            "order": r.n,
            "reference": reference,
            "reference_exact": exact,
            "approx": approx,
            "abs_error": format_error(r.abs_error.to_f64()),
            "rel_error": rel,
            "scaled_error": scaled,
        }));
        rows.push(vec![
            s,
            r.n.to_string(),
            reference,
            exact.unwrap_or_default(),
            approx,
            rel,
            scaled,
        ]);
    }
    CommandOutput {
        record: OutputRecord::new(command, json!({ "digits": digits, "rows": entries })),
        text,
        headers: vec![
            "s",
            "order",
            "reference",
            "reference_exact",
            "approx",
            "rel_error",
            "scaled_error",
        ],
        rows,
    }
}

pub fn verify_output(suite: &str, checks: &[Check], digits: u32) -> CommandOutput {
    let passed = checks.iter().filter(|c| c.passed).count();
    let mut text: Vec<String> = checks
        .iter()
        .map(|c| {
            let status = if c.passed { "PASS" } else { "FAIL" };
            format!(
                "{status} [{}] {}: {} (tolerance: {})",
                c.suite, c.name, c.measured, c.tolerance
            )
        })
        .collect();
    text.push(format!("{passed}/{} checks passed", checks.len()));
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.suite.to_string(),
                c.name.clone(),
                c.tolerance.clone(),
                c.measured.clone(),
                c.passed.to_string(),
            ]
        })
        .collect();
    CommandOutput {
        record: OutputRecord::new(
            "verify",
            json!({
                "suite": suite,
                "digits": digits,
                "passed": passed == checks.len(),
                "checks": checks,
            }),
        ),
        text,
        headers: vec!["suite", "name", "tolerance", "measured", "passed"],
        rows,
    }
}
