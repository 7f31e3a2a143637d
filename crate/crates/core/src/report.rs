//! Pass/fail reports shared by every checker.

use serde::{Deserialize, Serialize};

use crate::linalg::SparseVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub witness: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// Number of individual identity instances evaluated.
    pub checked: u64,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when nothing was evaluated at all.
    pub fn vacuous(&self) -> bool {
        self.checked == 0
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Counts one instance of `law` and records a violation when the sides differ.
    pub fn compare<W>(
        &mut self,
        law: &str,
        witness: W,
        lhs: &SparseVector,
        rhs: &SparseVector,
        labels: Option<&[String]>,
    ) -> bool
    where
        W: FnOnce() -> Vec<String>,
    {
        self.checked += 1;
        if lhs == rhs {
            return true;
        }
        self.violations.push(Violation {
            law: law.to_string(),
            witness: witness(),
            lhs: lhs.render(labels),
            rhs: rhs.render(labels),
        });
        false
    }

    /// Records a violation that is not an equation between two vectors.
    pub fn fail(&mut self, law: &str, witness: Vec<String>, lhs: impl Into<String>, rhs: impl Into<String>) {
        self.checked += 1;
        self.violations.push(Violation {
            law: law.to_string(),
            witness,
            lhs: lhs.into(),
            rhs: rhs.into(),
        });
    }

    pub fn count(&mut self) {
        self.checked += 1;
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        for mut v in other.violations {
            if !other.name.is_empty() && other.name != self.name {
                v.law = format!("{}: {}", other.name, v.law);
            }
            self.violations.push(v);
        }
        self.notes.extend(other.notes);
    }

    /// First violated law, if any.
    pub fn first_failure(&self) -> Option<&str> {
        self.violations.first().map(|v| v.law.as_str())
    }

    pub fn has_failure(&self, law: &str) -> bool {
        self.violations.iter().any(|v| v.law.contains(law))
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!("{}: pass ({} checked)", self.name, self.checked)
        } else {
            format!(
                "{}: FAIL ({} of {} checked violated; first: {})",
                self.name,
                self.violations.len(),
                self.checked,
                self.violations[0].law
            )
        }
    }
}
