//! Line-oriented verdict reports with a JSON mirror.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "BOUNDED-PASS")]
    BoundedPass,
    /// Recorded for context; never affects the exit status.
    #[serde(rename = "INFO")]
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::BoundedPass => "BOUNDED-PASS",
            Verdict::Info => "INFO",
        })
    }
}

/// One verdict line: `KIND name VERDICT detail`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub kind: String,
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    pub fn new(kind: &str, name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) -> Self {
        Check {
            kind: kind.to_string(),
            name: name.into(),
            verdict,
            detail: detail.into(),
        }
    }

    pub fn pass(kind: &str, name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(kind, name, Verdict::Pass, detail)
    }

    /// A failure; `witness` must name the concrete counterexample.
    pub fn fail(kind: &str, name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check::new(kind, name, Verdict::Fail, witness)
    }

    pub fn bounded(kind: &str, name: impl Into<String>, bound: impl fmt::Display, detail: &str) -> Self {
        let detail = if detail.is_empty() {
            format!("(bound={bound})")
        } else {
            format!("(bound={bound}) {detail}")
        };
        Check::new(kind, name, Verdict::BoundedPass, detail)
    }

    pub fn info(kind: &str, name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(kind, name, Verdict::Info, detail)
    }

    /// `PASS` when `ok`, otherwise `FAIL` with the given witness text.
    pub fn from_bool(kind: &str, name: impl Into<String>, ok: bool, pass: impl Into<String>, witness: impl Into<String>) -> Self {
        if ok {
            Check::pass(kind, name, pass)
        } else {
            Check::fail(kind, name, witness)
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn line(&self) -> String {
        let line = format!("{} {} {} {}", self.kind, self.name, self.verdict, self.detail);
        line.trim_end().to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub claim: String,
    pub input: String,
    pub bound: i64,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, claim: &str, input: impl Into<String>, bound: i64, seed: u64) -> Self {
        Report {
            suite: suite.to_string(),
            claim: claim.to_string(),
            input: input.into(),
            bound,
            seed,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# suite: {}\n# claim: {}\n# input: {}\n# bound: {}  seed: {}\n",
            self.suite, self.claim, self.input, self.bound, self.seed
        );
        for c in &self.checks {
            out.push_str(&c.line());
            out.push('\n');
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "RESULT {verdict} ({} checks, {} failed)\n",
            self.checks.len(),
            self.failures()
        ));
        out
    }

    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        value["result"] = serde_json::Value::String(if self.passed() { "PASS" } else { "FAIL" }.into());
        serde_json::to_string_pretty(&value).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom_line_format() {
        let c = Check::pass("AXIOM", "Id3", "(exhaustive, n=4096)");
        assert_eq!(c.line(), "AXIOM Id3 PASS (exhaustive, n=4096)");
        let c = Check::fail("AXIOM", "Id3", "c=0 X={2}");
        assert_eq!(c.line(), "AXIOM Id3 FAIL c=0 X={2}");
    }

    #[test]
    fn json_mirrors_text_fields() {
        let mut r = Report::new("axioms", "claim", "<2,3>", 12, 0);
        r.push(Check::bounded("CHECK", "finitary", 6, ""));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"][0]["verdict"], "BOUNDED-PASS");
        assert_eq!(v["checks"][0]["detail"], "(bound=6)");
        assert_eq!(v["result"], "PASS");
        assert!(r.to_text().ends_with("RESULT PASS (1 checks, 0 failed)\n"));
    }

    #[test]
    fn info_never_fails() {
        let mut r = Report::new("x", "c", "i", 1, 0);
        r.push(Check::info("AXIOM", "Id2", "fails at X={0}"));
        assert!(r.passed());
        r.push(Check::fail("CHECK", "y", "w"));
        assert!(!r.passed());
    }
}
