//! Scenario runner: composes the other modules into seeded verification
//! suites with JSON reports.

pub mod config;
pub mod fields;
pub mod report;
mod scenarios;

use std::time::Instant;

pub use config::{CheckTolerances, Config, MatrixSymbolSpec, Scenario, SymbolSpec};
pub use report::{report_write, Check, Report, TrialRecord};

use crate::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit code: every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code: at least one mathematical check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit code: configuration or runtime error.
pub const EXIT_ERROR: i32 = 2;

/// Runs a validated configuration.
pub fn run(cfg: &Config) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let (mut checks, trials) = scenarios::execute(cfg)?;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(Report {
        version: report::REPORT_VERSION,
        tool_version: TOOL_VERSION,
        scenario: cfg.scenario.clone(),
        seed: cfg.seed,
        grid: cfg.grid.clone(),
        tolerances: cfg.tolerances.clone(),
        sampling: cfg.sampling.clone(),
        semantics: "property test at finite resolution",
        passed: checks.iter().all(|c| c.passed),
        checks,
        elapsed_ms: start.elapsed().as_millis() as u64,
        trials,
    })
}

/// Maps a run outcome to the process exit code.
pub fn exit_code(outcome: &Result<Report>) -> i32 {
    match outcome {
        Ok(r) if r.passed => EXIT_PASS,
        Ok(_) => EXIT_CHECK_FAILED,
        Err(_) => EXIT_ERROR,
    }
}
