use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use vertex_algebroid::report::CheckReport;

use crate::CliError;

/// Text reports list at most this many violations per check.
const SHOWN_VIOLATIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violations,
    InputError,
    WindowExhausted,
    InternalFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violations => 1,
            Status::InputError => 2,
            Status::WindowExhausted => 3,
            Status::InternalFailure => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    #[serde(flatten)]
    pub report: CheckReport,
    /// Nothing was evaluated, so the pass carries no information.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobReport {
    pub command: String,
    pub input: String,
    #[serde(rename = "T")]
    pub t: u32,
    pub max_degree: i64,
    pub status: Status,
    pub exit_code: i32,
    #[serde(default)]
    pub error: Option<String>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default)]
    pub checks: Vec<CheckEntry>,
    /// Slice dimensions in degrees `0, 1/T, 2/T, …` (or `0, 1, 2, …` for
    /// untwisted objects).
    #[serde(default)]
    pub dimensions: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bases: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl JobReport {
    pub fn new(command: &str, input: &str, max_degree: i64) -> Self {
        Self {
            command: command.to_string(),
            input: input.to_string(),
            t: 1,
            max_degree,
            status: Status::Pass,
            exit_code: 0,
            error: None,
            warnings: Vec::new(),
            checks: Vec::new(),
            dimensions: BTreeMap::new(),
            bases: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, report: CheckReport) {
        let vacuous = report.vacuous();
        self.checks.push(CheckEntry { report, vacuous });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.report.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().map(|c| &c.report).find(|r| r.name == name)
    }

    /// Sets status and exit code from the outcome of the command body.
    pub fn finish(&mut self, outcome: Result<(), CliError>) {
        self.status = match outcome {
            Ok(()) if self.passed() => Status::Pass,
            Ok(()) => Status::Violations,
            Err(e) => {
                let s = match e {
                    CliError::Input(_) => Status::InputError,
                    CliError::Window(_) => Status::WindowExhausted,
                    CliError::Internal(_) => Status::InternalFailure,
                };
                self.error = Some(e.to_string());
                s
            }
        };
        self.exit_code = self.status.exit_code();
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} (T = {}, max degree {})", self.command, self.input, self.t, self.max_degree);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for (name, dims) in &self.dimensions {
            let list: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "dim {name}: {}", list.join(" "));
        }
        for (name, slices) in &self.bases {
            for (d, labels) in slices.iter().enumerate() {
                let _ = writeln!(out, "basis {name}[{d}]: {}", labels.join(", "));
            }
        }
        for c in &self.checks {
            let r = &c.report;
            let tag = if !r.passed() {
                "FAIL"
            } else if c.vacuous {
                "vacuous"
            } else {
                "pass"
            };
            let _ = writeln!(out, "[{tag}] {} ({} checked)", r.name, r.checked);
            for v in r.violations.iter().take(SHOWN_VIOLATIONS) {
                let _ = writeln!(out, "    {} at ({}): {} != {}", v.law, v.witness.join(", "), v.lhs, v.rhs);
            }
            if r.violations.len() > SHOWN_VIOLATIONS {
                let _ = writeln!(out, "    ... {} more", r.violations.len() - SHOWN_VIOLATIONS);
            }
            for n in &r.notes {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        let _ = writeln!(out, "status: {:?} (exit {})", self.status, self.exit_code);
        out
    }
}
