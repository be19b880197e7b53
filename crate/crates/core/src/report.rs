//! Pass/fail summaries shared by the verification suites.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    /// Number of identities or coefficients compared.
    pub checked: usize,
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Report {
        Report { suite: suite.into(), passed: true, checked: 0, first_failure: None, notes: Vec::new() }
    }

    /// Records one comparison; keeps only the first failure message.
    pub fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            if self.first_failure.is_none() {
                self.first_failure = Some(failure());
            }
            self.passed = false;
        }
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.check(false, || msg.into());
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        if !other.passed {
            self.passed = false;
            if self.first_failure.is_none() {
                self.first_failure = other.first_failure.map(|f| format!("{}: {f}", other.suite));
            }
        }
        self.notes.extend(other.notes);
    }
}
