//! Configuration, dispatch and reporting behind the `ghlab` binary.

mod args;
pub mod commands;
pub mod config;
pub mod report;

use std::time::Instant;

pub use args::{Cli, OutputFormat};
pub use config::{CommandKind, RunConfig, Tolerances};
pub use report::{strip_timing, Finding, Status, VerificationReport};

use crate::error::Error;

pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: VerificationReport,
    pub exit_code: i32,
}

fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::DegenerateSample(_) => EXIT_DEGENERATE,
        Error::Config(_)
        | Error::InvalidRange(_)
        | Error::BlockMismatch { .. }
        | Error::InvalidFamily(_)
        | Error::Parse(_) => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

/// Validates the config, runs the command and assembles the report.
/// Degenerate sampling keeps the findings gathered so far.
pub fn run(config: &RunConfig) -> RunOutcome {
    let start = Instant::now();
    let mut findings = Vec::new();
    let result = config
        .validate()
        .and_then(|()| commands::execute(config, &mut findings));
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let (error, code) = match &result {
        Ok(()) => (None, None),
        Err(e) => (Some(e.to_string()), Some(error_exit_code(e))),
    };
    let report = VerificationReport::new(config.clone(), findings, error, elapsed_ms);
    let exit_code = code.unwrap_or(match report.status {
        Status::Fail => EXIT_FAIL,
        Status::Pass | Status::Warn => 0,
    });
    RunOutcome { report, exit_code }
}
