use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;

/// What a passing check establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// An identity or bound evaluated directly; residual under tolerance.
    Theorem,
    /// A hypothesis quantified over all inputs, tested on a sample only.
    Falsification,
    /// A precondition of the construction.
    Hypothesis,
    /// Exact (symbolic or rational) comparison.
    Exact,
}

impl CheckKind {
    fn label(self) -> &'static str {
        match self {
            CheckKind::Theorem => "theorem check",
            CheckKind::Falsification => "falsification on sample",
            CheckKind::Hypothesis => "hypothesis",
            CheckKind::Exact => "exact check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub passed: bool,
    /// Measured residual or excess, when the check is numeric.
    pub value: Option<f64>,
    /// Tolerance the value was compared against.
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Output of one command: a headline, the checks it ran and a data payload.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub summary: String,
    pub checks: Vec<Check>,
    pub data: Value,
    /// Extra human-readable lines for text mode.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Report {
            command: command.into(),
            seed,
            summary: String::new(),
            checks: Vec::new(),
            data: Value::Null,
            lines: Vec::new(),
        }
    }

    /// Records `value <= tol`.
    pub fn bound(&mut self, name: &str, kind: CheckKind, value: f64, tol: f64) -> bool {
        let passed = value <= tol;
        self.checks.push(Check { name: name.into(), kind, passed, value: Some(value), tol: Some(tol), note: None });
        passed
    }

    pub fn flag(&mut self, name: &str, kind: CheckKind, passed: bool, note: Option<String>) -> bool {
        self.checks.push(Check { name: name.into(), kind, passed, value: None, tol: None, note });
        passed
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.summary).unwrap();
        for l in &self.lines {
            writeln!(out, "  {l}").unwrap();
        }
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(out, "  [{status}] {}: {}", c.kind.label(), c.name).unwrap();
            if let (Some(v), Some(t)) = (c.value, c.tol) {
                write!(out, " (value {} vs tol {})", sci(v), sci(t)).unwrap();
            }
            if let Some(n) = &c.note {
                write!(out, " - {n}").unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "  seed {}", self.seed).unwrap();
        out
    }
}

/// Short decimal form: 12 decimals, trailing zeros trimmed.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub fn sci(x: f64) -> String {
    if x == 0.0 { "0".into() } else { format!("{x:.3e}") }
}
