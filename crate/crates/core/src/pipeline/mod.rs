//! Replay scripts: a sequence of steps over named values, each step with
//! optional `expect-*` checkpoints. A run stops at the first failure.

mod runner;
mod script;

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use runner::{parse_class_list, parse_int_expr, sha256_hex, Runner, SolverState, Value};
pub use script::{parse_script, ParseError, Step, KINDS};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("missing input data for `{id}`: expected {}", path.display())]
    MissingData { id: String, path: PathBuf },
    #[error("line {line}: checkpoint {what}: expected {expected}, got {got}")]
    Checkpoint { line: usize, what: String, expected: String, got: String },
    #[error("line {line}: {kind}: {msg}")]
    Step { line: usize, kind: String, msg: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Io(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug)]
pub struct StepReport {
    pub line: usize,
    pub kind: String,
    pub status: StepStatus,
    pub lines: Vec<String>,
}

#[derive(Debug, Default)]
pub struct Report {
    pub steps: Vec<StepReport>,
    pub audit: Vec<String>,
    pub error: Option<PipelineError>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.error.is_none()
    }

    pub fn checkpoints(&self) -> (usize, usize) {
        let pass = self.steps.iter().filter(|s| s.status == StepStatus::Pass).count();
        (pass, self.steps.len() - pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let tag = match s.status {
                StepStatus::Pass => "PASS",
                StepStatus::Fail => "FAIL",
            };
            writeln!(f, "{tag} line {} {}", s.line, s.kind)?;
            for l in &s.lines {
                writeln!(f, "    {l}")?;
            }
        }
        let (p, q) = self.checkpoints();
        writeln!(f, "{p} step(s) passed, {q} failed")
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
}

/// Runs script text against a data directory. Parse errors are reported
/// before any step runs.
pub fn run_source(src: &str, data_dir: &Path, opts: &RunOptions) -> Report {
    match parse_script(src) {
        Ok(steps) => Runner::new(data_dir, opts.out_dir.clone()).run(&steps),
        Err(e) => Report { error: Some(e.into()), ..Report::default() },
    }
}

pub fn run_script(path: &Path, data_dir: &Path, opts: &RunOptions) -> Report {
    match std::fs::read_to_string(path) {
        Ok(src) => run_source(&src, data_dir, opts),
        Err(e) => Report { error: Some(PipelineError::Io(format!("{}: {e}", path.display()))), ..Report::default() },
    }
}
