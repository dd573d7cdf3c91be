//! Machine-readable verification reports.

use serde::Serialize;

/// Cap on stored counterexample messages per suite; instances are still
/// counted past the cap.
const MAX_FAILURES: usize = 10;

/// Result of one verification suite: how many instances ran, which ones
/// violated their identity, and how many aborted on a truncation/budget
/// boundary instead of producing a verdict.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub instances: u64,
    pub failures: Vec<String>,
    pub aborted: u64,
    #[serde(skip)]
    pub failure_count: u64,
    #[serde(skip)]
    pub abort_notes: Vec<String>,
}

impl SuiteOutcome {
    pub fn new(name: impl Into<String>) -> SuiteOutcome {
        SuiteOutcome {
            name: name.into(),
            instances: 0,
            failures: Vec::new(),
            aborted: 0,
            failure_count: 0,
            abort_notes: Vec::new(),
        }
    }

    /// Record one instance with its verdict; the message is only built on
    /// failure.
    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(msg());
            }
        }
    }

    pub fn abort(&mut self, msg: impl Into<String>) {
        self.instances += 1;
        self.aborted += 1;
        if self.abort_notes.len() < MAX_FAILURES {
            self.abort_notes.push(msg.into());
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.aborted == 0
    }
}

/// Top-level report written by the CLI.
#[derive(Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub config: serde_json::Value,
    pub suites: Vec<SuiteOutcome>,
}

impl Report {
    pub fn new(config: serde_json::Value) -> Report {
        Report { version: 1, config, suites: Vec::new() }
    }

    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed())
    }

    pub fn any_aborted(&self) -> bool {
        self.suites.iter().any(|s| s.aborted > 0)
    }

    /// Deterministic serialization: struct field order plus sorted maps.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_bookkeeping() {
        let mut s = SuiteOutcome::new("demo");
        s.check(true, || unreachable!());
        s.check(false, || "bad".into());
        assert_eq!(s.instances, 2);
        assert_eq!(s.failures, vec!["bad".to_string()]);
        assert!(!s.passed());
        let mut t = SuiteOutcome::new("aborts");
        t.abort("too big");
        assert!(!t.passed());
        assert_eq!(t.aborted, 1);
    }

    #[test]
    fn report_serializes_with_schema_fields() {
        let mut r = Report::new(serde_json::json!({"backend": "vect"}));
        r.suites.push(SuiteOutcome::new("s"));
        let v: serde_json::Value = serde_json::from_str(&r.to_json_string()).unwrap();
        assert_eq!(v["version"], 1);
        assert_eq!(v["suites"][0]["instances"], 0);
        assert!(v["suites"][0]["failures"].as_array().unwrap().is_empty());
    }
}
