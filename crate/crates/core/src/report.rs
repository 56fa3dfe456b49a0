use serde::Serialize;

use crate::weyl::AlgElement;

/// Outcome of a single identity check.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// An ordered list of check outcomes.
#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records an identity whose residual must vanish.
    pub fn identity(&mut self, suite: &str, name: impl Into<String>, residual: &AlgElement) -> bool {
        let passed = residual.is_zero();
        self.checks.push(CheckResult {
            suite: suite.into(),
            name: name.into(),
            passed,
            residual: (!passed).then(|| residual.render()),
            detail: None,
        });
        passed
    }

    /// Records a check with a free-form explanation on failure.
    pub fn check(&mut self, suite: &str, name: impl Into<String>, passed: bool, detail: impl FnOnce() -> String) -> bool {
        self.checks.push(CheckResult {
            suite: suite.into(),
            name: name.into(),
            passed,
            residual: None,
            detail: (!passed).then(detail),
        });
        passed
    }

    /// Records an error raised while evaluating a check.
    pub fn error(&mut self, suite: &str, name: impl Into<String>, err: &crate::Error) {
        self.checks.push(CheckResult {
            suite: suite.into(),
            name: name.into(),
            passed: false,
            residual: None,
            detail: Some(err.to_string()),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    /// Sorts by suite, then check name.
    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| (&a.suite, &a.name).cmp(&(&b.suite, &b.name)));
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} [{}] {}\n", c.suite, c.name));
            if let Some(r) = &c.residual {
                out.push_str(&format!("    residual: {r}\n"));
            }
            if let Some(d) = &c.detail {
                out.push_str(&format!("    {d}\n"));
            }
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}
