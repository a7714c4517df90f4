//! Pass/fail reports with deterministic text and key-value renderings.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, checked: usize) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            checked,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, checked: usize, witness: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: false,
            checked,
            witness: Some(witness.into()),
        }
    }

    /// Runs `cases` until the first failure; `check` returns `Some(witness)`
    /// on failure.
    pub fn run<T, E>(
        name: impl Into<String>,
        cases: impl IntoIterator<Item = T>,
        mut check: impl FnMut(T) -> Result<Option<String>, E>,
    ) -> Result<Self, E> {
        let name = name.into();
        let mut n = 0;
        for case in cases {
            n += 1;
            if let Some(w) = check(case)? {
                return Ok(CheckResult::fail(name, n, w));
            }
        }
        Ok(CheckResult::pass(name, n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub header: Vec<(String, String)>,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            header: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.header.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.title).unwrap();
        for (k, v) in &self.header {
            writeln!(s, "  {k}: {v}").unwrap();
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(s, "  [{tag}] {} ({} cases)", c.name, c.checked).unwrap();
            if let Some(w) = &c.witness {
                writeln!(s, "         witness: {w}").unwrap();
            }
        }
        writeln!(s, "  result: {}", if self.passed() { "pass" } else { "fail" }).unwrap();
        s
    }

    pub fn render_kv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "report={}", self.title).unwrap();
        for (k, v) in &self.header {
            writeln!(s, "{k}={v}").unwrap();
        }
        for c in &self.checks {
            let key = c.name.replace(' ', "_");
            writeln!(s, "check.{key}={}", if c.passed { "pass" } else { "fail" }).unwrap();
            writeln!(s, "check.{key}.cases={}", c.checked).unwrap();
            if let Some(w) = &c.witness {
                writeln!(s, "check.{key}.witness={w}").unwrap();
            }
        }
        writeln!(s, "result={}", if self.passed() { "pass" } else { "fail" }).unwrap();
        s
    }
}
