use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

/// Verdict on one labelled check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checked: Option<u64>,
    #[serde(skip_serializing_if = "is_zero")]
    pub inconclusive: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

fn is_zero(x: &u64) -> bool {
    *x == 0
}

impl Check {
    pub fn new(label: impl Into<String>, pass: bool) -> Self {
        Check {
            label: label.into(),
            pass,
            checked: None,
            inconclusive: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn fail(label: impl Into<String>, witnesses: Vec<String>) -> Self {
        Check::new(label, false).witnesses(witnesses)
    }

    /// Pass iff `witnesses` is empty.
    pub fn from_witnesses(label: impl Into<String>, witnesses: Vec<String>) -> Self {
        let pass = witnesses.is_empty();
        Check::new(label, pass).witnesses(witnesses)
    }

    pub fn checked(mut self, n: u64) -> Self {
        self.checked = Some(n);
        self
    }

    pub fn inconclusive(mut self, n: u64) -> Self {
        self.inconclusive = n;
        self
    }

    pub fn witnesses(mut self, w: Vec<String>) -> Self {
        self.witnesses = w;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub artifact: String,
    pub command: String,
    pub seed: u64,
    pub inputs: Vec<InputHash>,
    pub checks: Vec<Check>,
    pub result: BTreeMap<String, serde_json::Value>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: String, seed: u64) -> Self {
        Report {
            artifact: format!("superroot {}", env!("CARGO_PKG_VERSION")),
            command,
            seed,
            inputs: Vec::new(),
            checks: Vec::new(),
            result: BTreeMap::new(),
            verdict: String::new(),
            timing_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub(crate) fn finish(&mut self) {
        self.verdict = if self.passed() { "pass" } else { "fail" }.into();
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.artifact);
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "seed: {}", self.seed);
        for i in &self.inputs {
            let _ = writeln!(out, "input: {} sha256:{}", i.path, i.sha256);
        }
        for c in &self.checks {
            let mut line = format!("{} {}", if c.pass { "pass" } else { "FAIL" }, c.label);
            if let Some(n) = c.checked {
                let _ = write!(line, " [checked {n}");
                if c.inconclusive > 0 {
                    let _ = write!(line, ", inconclusive {}", c.inconclusive);
                }
                line.push(']');
            }
            let _ = writeln!(out, "{line}");
            for w in &c.witnesses {
                let _ = writeln!(out, "    {w}");
            }
        }
        for (k, v) in &self.result {
            let body = match v {
                serde_json::Value::String(s) => s.clone(),
                other => serde_json::to_string(other).expect("values serialize"),
            };
            let _ = writeln!(out, "{k}: {body}");
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "time: {t} ms");
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }
}
