use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

/// Violations beyond this many are counted but not stored.
const MAX_STORED_VIOLATIONS: usize = 64;

/// Outcome of a verification pass. An empty violation list means success.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub violation_count: usize,
    pub violations: Vec<String>,
    pub details: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Report {
        Report { check: check.into(), ..Report::default() }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Report {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn violation(&mut self, message: impl Into<String>) {
        self.violation_count += 1;
        if self.violations.len() < MAX_STORED_VIOLATIONS {
            self.violations.push(message.into());
        }
    }

    /// Records a violation unless `ok` holds.
    pub fn require(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.violation(message());
        }
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl Serialize) {
        self.details.insert(key.into(), serde_json::to_value(value).expect("report details serialize"));
    }

    /// Folds another report in, prefixing its violations with its check name.
    pub fn absorb(&mut self, other: Report) {
        for v in &other.violations {
            if self.violations.len() < MAX_STORED_VIOLATIONS {
                self.violations.push(format!("{}: {v}", other.check));
            }
        }
        self.violation_count += other.violation_count;
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        writeln!(f, "{}: {status}", self.check)?;
        if let Some(note) = &self.note {
            writeln!(f, "  note: {note}")?;
        }
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        if self.violation_count > self.violations.len() {
            writeln!(f, "  … {} more", self.violation_count - self.violations.len())?;
        }
        Ok(())
    }
}
