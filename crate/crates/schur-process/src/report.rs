//! Machine-readable run reports for the `schur-dpp` binary.
//!
//! Every report is a flat serde structure with a `schema` version field.
//! JSON is the canonical form; CSV is a lossless flat projection with a
//! `key,value` row per leaf (nested fields joined by dots, array slots
//! by index). Serialization is deterministic, so identical configs
//! produce byte-identical reports.

use serde::Serialize;
use serde_json::Value;
use std::io::{self, Write};

pub const SCHEMA_VERSION: u32 = 1;

/// A single named check inside a verification suite.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, max_error: f64, tolerance: f64) -> Check {
        Check {
            name: name.to_string(),
            max_error,
            tolerance,
            pass: max_error.is_finite() && max_error <= tolerance,
        }
    }
}

/// Kernel matrix report: entries as (re, im) pairs in row-major order.
#[derive(Debug, Serialize)]
pub struct KernelReport {
    pub schema: u32,
    pub command: String,
    pub flavor: String,
    #[serde(rename = "T")]
    pub points: Value,
    pub det: f64,
    pub entries: Vec<[f64; 2]>,
    pub radii: [f64; 2],
    pub nodes: usize,
    pub est_error: f64,
}

/// Correlation comparison report: enumeration oracle next to the
/// kernel determinant.
#[derive(Debug, Serialize)]
pub struct RhoReport {
    pub schema: u32,
    pub command: String,
    pub flavor: String,
    #[serde(rename = "T")]
    pub points: Value,
    pub bruteforce: f64,
    pub tail_bound: f64,
    pub terms: u64,
    pub det: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub truncation: u32,
    pub nodes: usize,
}

/// Verification suite report.
#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub command: String,
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Cauchy determinant sweep report.
#[derive(Debug, Serialize)]
pub struct CauchyReport {
    pub schema: u32,
    pub command: String,
    pub samples: usize,
    pub max_dim: usize,
    pub seed: u64,
    pub max_rel_error_plain: f64,
    pub max_rel_error_process: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Output format of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

fn push_csv_value(out: &mut String, v: &Value) {
    match v {
        Value::String(s) => {
            // quote strings so commas in values stay unambiguous
            out.push('"');
            out.push_str(&s.replace('"', "\"\""));
            out.push('"');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn flatten_into(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_into(&key, val, out);
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                flatten_into(&format!("{prefix}.{i}"), val, out);
            }
        }
        leaf => {
            out.push_str(prefix);
            out.push(',');
            push_csv_value(out, leaf);
            out.push('\n');
        }
    }
}

/// Flat `key,value` CSV projection of any report.
pub fn to_csv(report: &Value) -> String {
    let mut out = String::from("key,value\n");
    flatten_into("", report, &mut out);
    out
}

/// Renders a report in the requested format, trailing newline included.
pub fn render<T: Serialize>(report: &T, format: ReportFormat) -> String {
    let value = serde_json::to_value(report).expect("report serialization cannot fail");
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("valid JSON value");
            s.push('\n');
            s
        }
        ReportFormat::Csv => to_csv(&value),
    }
}

/// Writes a rendered report to `out` (a path) or stdout.
pub fn emit(rendered: &str, out: Option<&std::path::Path>) -> io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, rendered),
        None => io::stdout().write_all(rendered.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_projection_is_flat_and_ordered() {
        let v = json!({"schema": 1, "det": 0.5, "entries": [[1.0, 0.0]], "name": "a,b"});
        let csv = to_csv(&v);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "key,value");
        assert!(lines.contains(&"schema,1"));
        assert!(lines.contains(&"det,0.5"));
        assert!(lines.contains(&"entries.0.0,1.0"));
        assert!(lines.contains(&"entries.0.1,0.0"));
        assert!(lines.contains(&"name,\"a,b\""));
    }

    #[test]
    fn render_is_deterministic() {
        let report = VerifyReport {
            schema: SCHEMA_VERSION,
            command: "verify".into(),
            suite: "eigenfunction".into(),
            checks: vec![Check::new("grid", 1e-14, 1e-12)],
            pass: true,
        };
        let a = render(&report, ReportFormat::Json);
        let b = render(&report, ReportFormat::Json);
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": 1"));
        let c = render(&report, ReportFormat::Csv);
        assert!(c.starts_with("key,value\n"));
        assert!(c.contains("checks.0.pass,true"));
    }

    #[test]
    fn check_pass_logic() {
        assert!(Check::new("ok", 1e-13, 1e-12).pass);
        assert!(!Check::new("bad", 1e-11, 1e-12).pass);
        assert!(!Check::new("nan", f64::NAN, 1e-12).pass);
    }
}
