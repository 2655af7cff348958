//! Machine-readable output: the verification report and computed tables.

use serde::Serialize;

use crate::config::Format;
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    /// Truncation tail proxy of `value`; zero when nothing was truncated.
    pub tail: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64, tail: f64) -> Self {
        CheckResult {
            name: name.into(),
            value,
            tail,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// Passes when `value > threshold`. Used for checks that must reject.
    pub fn above(name: impl Into<String>, value: f64, threshold: f64, tail: f64) -> Self {
        CheckResult {
            name: name.into(),
            value,
            tail,
            tolerance: threshold,
            pass: value > threshold,
        }
    }

    pub fn flag(
        name: impl Into<String>,
        value: f64,
        tolerance: f64,
        tail: f64,
        pass: bool,
    ) -> Self {
        CheckResult {
            name: name.into(),
            value,
            tail,
            tolerance,
            pass,
        }
    }

    /// A check whose computation failed.
    pub fn error(name: impl Into<String>, message: &str) -> Self {
        CheckResult {
            name: format!("{}: {message}", name.into()),
            value: f64::NAN,
            tail: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
        }
    }

    /// Criterion number from the `cNN.` name prefix.
    pub fn criterion(&self) -> Option<u32> {
        self.name.strip_prefix('c')?.get(..2)?.parse().ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constants {
    pub kappa_star: f64,
    pub kappa_meanvalue: f64,
    pub kappa_kernel: f64,
    #[serde(rename = "M_r_hat")]
    pub m_r_hat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config_hash: String,
    pub constants: Constants,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&json_safe(self))? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["kind", "name", "value", "tail", "tolerance", "pass"])?;
                w.write_record(["meta", "config_hash", &self.config_hash, "", "", ""])?;
                let c = &self.constants;
                for (name, v) in [
                    ("kappa_star", Some(c.kappa_star)),
                    ("kappa_meanvalue", Some(c.kappa_meanvalue)),
                    ("kappa_kernel", Some(c.kappa_kernel)),
                    ("M_r_hat", c.m_r_hat),
                ] {
                    w.write_record(["constant", name, &opt(v), "", "", ""])?;
                }
                for r in &self.results {
                    w.write_record([
                        "result",
                        &r.name,
                        &num(r.value),
                        &num(r.tail),
                        &num(r.tolerance),
                        if r.pass { "true" } else { "false" },
                    ])?;
                }
                Ok(
                    String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)
                        .expect("csv output is utf-8"),
                )
            }
        }
    }
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        String::new()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// JSON has no NaN; failed computations are emitted as `null`.
fn json_safe<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

/// A computed table: named columns, one row per evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub config_hash: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(config_hash: String, columns: &[&str]) -> Self {
        Table {
            config_hash,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&json_safe(self))? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|v| num(*v)))?;
                }
                Ok(
                    String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)
                        .expect("csv output is utf-8"),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> Report {
        Report {
            config_hash: "abc".into(),
            constants: Constants {
                kappa_star: 1.0,
                kappa_meanvalue: 0.5,
                kappa_kernel: 1.0,
                m_r_hat: None,
            },
            results: vec![
                CheckResult::at_most("c01.invariance", 1e-13, 1e-11, 0.0),
                CheckResult::error("c03.covolume", "boom"),
            ],
        }
    }

    #[test]
    fn json_uses_null_for_missing_values() {
        let r = report();
        let text = r.render(Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["constants"]["M_r_hat"].is_null());
        assert!(v["results"][1]["value"].is_null());
        assert_eq!(v["results"][0]["pass"], true);
        assert!(!r.passed());
    }

    #[test]
    fn csv_mirrors_the_report() {
        let text = report().render(Format::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kind,name,value,tail,tolerance,pass");
        assert_eq!(lines.len(), 1 + 1 + 4 + 2);
        assert!(lines[6].starts_with("result,c01.invariance,1e-13,"));
    }

    #[test]
    fn criterion_prefix() {
        assert_eq!(
            CheckResult::at_most("c07.x", 0.0, 1.0, 0.0).criterion(),
            Some(7)
        );
        assert_eq!(
            CheckResult::at_most("other", 0.0, 1.0, 0.0).criterion(),
            None
        );
    }
}
