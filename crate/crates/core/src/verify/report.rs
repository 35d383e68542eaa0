//! Structured, reproducible results for the verification suites.
//!
//! Reports carry no timings or machine-specific data, so the JSON rendering
//! of a run is byte-for-byte stable for a given corpus and suite version.
//! Failures keep enough context (bond table, family label, witness words) to
//! replay the offending check by hand.

use serde::Serialize;

/// One failed check.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    /// Stable short name of the check that tripped.
    pub check: String,
    /// Bond table of the group the failure occurred in.
    pub matrix: String,
    /// Family label when the failure concerns one matching, `None` when it
    /// concerns the group itself.
    pub family: Option<String>,
    /// The offending element or pair, rendered as words.
    pub witness: Option<String>,
    /// Expected versus found, in words.
    pub detail: String,
}

/// Outcome of one suite on one corpus case.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub case: String,
    /// Individual assertions evaluated.
    pub checks: u64,
    /// Assertions skipped because the ball cannot settle them (for example a
    /// predicted element further out than the bound). Skips are counted, not
    /// silently dropped.
    pub skipped: u64,
    pub failures: Vec<Failure>,
    /// Failures beyond the per-case cap; only the count is kept.
    pub suppressed_failures: u64,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.suppressed_failures == 0
    }
}

/// Outcome of one suite over the whole corpus, cases in corpus order.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseReport::passed)
    }

    pub fn checks(&self) -> u64 {
        self.cases.iter().map(|c| c.checks).sum()
    }

    pub fn skipped(&self) -> u64 {
        self.cases.iter().map(|c| c.skipped).sum()
    }

    pub fn failure_count(&self) -> u64 {
        self.cases
            .iter()
            .map(|c| c.failures.len() as u64 + c.suppressed_failures)
            .sum()
    }

    /// Stable JSON rendering (struct field order, corpus case order).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    /// One human-readable line: name, case/check/failure counts.
    pub fn summary_line(&self) -> String {
        let mut line = format!(
            "{}: {} {} cases, {} checks",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases.len(),
            self.checks(),
        );
        let skipped = self.skipped();
        if skipped > 0 {
            line.push_str(&format!(", {skipped} skipped"));
        }
        let failures = self.failure_count();
        if failures > 0 {
            line.push_str(&format!(", {failures} failures"));
        }
        line
    }
}

/// Per-case accumulator handed to the suite bodies. Caps the stored failures
/// so a systematically broken check cannot balloon the report, while still
/// counting everything.
#[derive(Debug)]
pub struct Recorder {
    case: String,
    matrix: String,
    checks: u64,
    skipped: u64,
    failures: Vec<Failure>,
    suppressed: u64,
}

/// Stored failures per case before further ones are only counted.
const FAILURE_CAP: usize = 25;

impl Recorder {
    pub fn new(case: &str, matrix: &crate::coxeter::CoxeterMatrix) -> Recorder {
        Recorder {
            case: case.to_string(),
            matrix: matrix.to_json_string(),
            checks: 0,
            skipped: 0,
            failures: Vec::new(),
            suppressed: 0,
        }
    }

    /// Records one evaluated assertion; `pass == false` files a failure.
    pub fn check(
        &mut self,
        name: &str,
        family: Option<&str>,
        witness: Option<String>,
        pass: bool,
        detail: impl FnOnce() -> String,
    ) {
        self.checks += 1;
        if pass {
            return;
        }
        if self.failures.len() >= FAILURE_CAP {
            self.suppressed += 1;
            return;
        }
        self.failures.push(Failure {
            check: name.to_string(),
            matrix: self.matrix.clone(),
            family: family.map(str::to_string),
            witness,
            detail: detail(),
        });
    }

    /// Records an assertion the ball cannot settle.
    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Files an error (from a fallible step that should have succeeded) as a
    /// failure.
    pub fn error(&mut self, name: &str, family: Option<&str>, err: &crate::Error) {
        self.check(name, family, None, false, || format!("error: {err}"));
    }

    pub fn finish(self) -> CaseReport {
        CaseReport {
            case: self.case,
            checks: self.checks,
            skipped: self.skipped,
            failures: self.failures,
            suppressed_failures: self.suppressed,
        }
    }
}
