//! Scenario reports. Checks are sorted by name, so the payload depends only
//! on the configuration, never on execution order.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::config::{CheckTolerances, Scenario};
use crate::engine::GridSpec;
use crate::psd::SamplingPlan;
use crate::Result;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// The measured quantity compared against `tol`; `null` when the check
    /// could not be evaluated.
    pub value: Option<f64>,
    pub tol: f64,
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, value: f64, tol: f64) -> Self {
        Self { name: name.into(), passed, value: value.is_finite().then_some(value), tol, witness: None }
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    /// A check that could not be evaluated because a hypothesis failed.
    pub fn errored(name: impl Into<String>, tol: f64, err: &crate::Error) -> Self {
        Self {
            name: name.into(),
            passed: false,
            value: None,
            tol,
            witness: Some(serde_json::json!({ "error": err.to_string() })),
        }
    }
}

/// One row of the optional per-trial CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub check: String,
    pub trial: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub tool_version: &'static str,
    pub scenario: Scenario,
    pub seed: u64,
    pub grid: GridSpec,
    pub tolerances: CheckTolerances,
    pub sampling: SamplingPlan,
    /// Verdicts are property-test evidence at finite resolution.
    pub semantics: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub trials: Vec<TrialRecord>,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Checks whose name starts with `prefix`.
    pub fn checks_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name.starts_with(prefix))
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// The report without `elapsed_ms`, for byte-level comparisons.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serialises");
        if let Value::Object(map) = &mut v {
            map.remove("elapsed_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serialises")
    }

    pub fn write_trials_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["check", "trial", "value"]).map_err(csv_err)?;
        for r in &self.trials {
            out.write_record([r.check.clone(), r.trial.to_string(), format!("{:e}", r.value)])
                .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::Io(e.to_string())
}

pub fn report_write(report: &Report, path: &Path) -> Result<()> {
    let mut text = report.to_json();
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
