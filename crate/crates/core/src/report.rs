//! Structured pass/fail records.
//!
//! Every check records the largest residual it observed together with the
//! tolerance it was judged against, so a report can be re-judged under a
//! different tolerance without recomputation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    /// Judges `max_residual < tolerance`. A NaN residual always fails.
    pub fn new(name: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_residual,
            tolerance,
            pass: max_residual < tolerance,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    /// Wall-clock seconds. Left empty unless explicitly requested, since it
    /// would make otherwise identical runs differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<f64>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
            pass: true,
            timing: None,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    /// Appends every check of `other`, prefixing names with its suite name.
    pub fn absorb(&mut self, other: VerificationReport) {
        for mut check in other.checks {
            check.name = format!("{}/{}", other.suite, check.name);
            self.push(check);
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Re-judges every check against `tol`.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        for check in &mut self.checks {
            check.tolerance = tol;
            check.pass = check.max_residual < tol;
        }
        self.pass = self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_residual)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_pass_tracks_every_check() {
        let mut r = VerificationReport::new("s");
        r.push(CheckRecord::new("a", 0.0, 1e-12));
        assert!(r.pass);
        r.push(CheckRecord::new("b", 1e-3, 1e-12));
        assert!(!r.pass);
        let relaxed = r.clone().with_tolerance(1e-2);
        assert!(relaxed.pass);
        assert_eq!(relaxed.checks[1].tolerance, 1e-2);
    }

    #[test]
    fn nan_residual_fails() {
        assert!(!CheckRecord::new("nan", f64::NAN, 1.0).pass);
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut inner = VerificationReport::new("inner");
        inner.push(CheckRecord::new("x", 0.0, 1.0));
        let mut outer = VerificationReport::new("outer");
        outer.absorb(inner);
        assert!(outer.check("inner/x").is_some());
    }
}
