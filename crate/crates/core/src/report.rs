//! Structured check results shared by the lemma suites and sweeps.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Violations kept verbatim per check; the count keeps going past this.
pub const MAX_RECORDED_VIOLATIONS: usize = 32;

/// One failed assertion, with enough context to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub step: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<u64>,
    pub vertices: Vec<usize>,
    pub values: Vec<i64>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub start: Option<Vec<u64>>,
}

impl Violation {
    pub fn new(step: u64, detail: impl Into<String>) -> Self {
        Violation {
            step,
            window: None,
            vertices: Vec::new(),
            values: Vec::new(),
            detail: detail.into(),
            start: None,
        }
    }

    pub fn window(mut self, t: u64) -> Self {
        self.window = Some(t);
        self
    }

    pub fn vertices(mut self, vs: impl IntoIterator<Item = usize>) -> Self {
        self.vertices = vs.into_iter().collect();
        self
    }

    pub fn values(mut self, vs: impl IntoIterator<Item = i64>) -> Self {
        self.values = vs.into_iter().collect();
        self
    }
}

/// Outcome of one named check across any number of instances.
///
/// `hypothesis_count` counts how often the check's premise was met (for
/// unconditional checks, how often the assertion was evaluated), so a check
/// that never fired is visible as such.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub gated: bool,
    pub hypothesis_count: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, gated: bool) -> Self {
        CheckReport {
            check: check.into(),
            gated,
            hypothesis_count: 0,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    /// Record one evaluation; `failure` is `Some` when the assertion broke.
    pub fn record(&mut self, failure: Option<Violation>) {
        self.hypothesis_count += 1;
        if let Some(v) = failure {
            self.fail(v);
        }
    }

    pub fn fail(&mut self, v: Violation) {
        self.violation_count += 1;
        if self.violations.len() < MAX_RECORDED_VIOLATIONS {
            self.violations.push(v);
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn merge(&mut self, other: &CheckReport) {
        self.hypothesis_count += other.hypothesis_count;
        self.violation_count += other.violation_count;
        for v in &other.violations {
            if self.violations.len() >= MAX_RECORDED_VIOLATIONS {
                break;
            }
            self.violations.push(v.clone());
        }
    }

    /// Tag every stored violation with the start position it came from.
    pub fn with_start(mut self, start: &[u64]) -> Self {
        for v in &mut self.violations {
            v.start.get_or_insert_with(|| start.to_vec());
        }
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subject = if self.gated { "hypothesis met" } else { "evaluated" };
        if self.passed() {
            write!(
                f,
                "{}: {subject} {} times, all passed",
                self.check, self.hypothesis_count
            )
        } else {
            write!(
                f,
                "{}: {subject} {} times, {} violations",
                self.check, self.hypothesis_count, self.violation_count
            )
        }
    }
}

/// An ordered collection of checks, merged by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn push(&mut self, report: CheckReport) {
        match self.checks.iter_mut().find(|c| c.check == report.check) {
            Some(existing) => existing.merge(&report),
            None => self.checks.push(report),
        }
    }

    pub fn absorb(&mut self, other: SuiteReport) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn get(&self, check: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn total_violations(&self) -> u64 {
        self.checks.iter().map(|c| c.violation_count).sum()
    }

    /// CSV with columns `check,hypothesis_count,violation_count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,hypothesis_count,violation_count\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{}\n",
                c.check, c.hypothesis_count, c.violation_count
            ));
        }
        out
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_by_name_and_csv() {
        let mut a = CheckReport::new("lemma_3_4", true);
        a.record(None);
        let mut b = CheckReport::new("lemma_3_4", true);
        b.record(Some(Violation::new(3, "p != t").window(2)));
        let mut suite = SuiteReport::default();
        suite.push(a);
        suite.push(b);
        assert_eq!(suite.checks.len(), 1);
        assert_eq!(suite.get("lemma_3_4").unwrap().hypothesis_count, 2);
        assert!(!suite.passed());
        assert_eq!(
            suite.to_csv(),
            "check,hypothesis_count,violation_count\nlemma_3_4,2,1\n"
        );
    }

    #[test]
    fn display_marks_vacuous_gates() {
        let mut c = CheckReport::new("eq_7", true);
        assert_eq!(c.to_string(), "eq_7: hypothesis met 0 times, all passed");
        c.record(None);
        assert_eq!(c.to_string(), "eq_7: hypothesis met 1 times, all passed");
    }

    #[test]
    fn stored_violations_are_capped() {
        let mut c = CheckReport::new("x", false);
        for i in 0..100 {
            c.record(Some(Violation::new(i, "bad")));
        }
        assert_eq!(c.violation_count, 100);
        assert_eq!(c.violations.len(), MAX_RECORDED_VIOLATIONS);
    }
}
