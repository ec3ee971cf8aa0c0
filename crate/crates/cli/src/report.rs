use std::fmt::Write as _;

use conic_zariski::numeric::Tolerances;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub value: Value,
    /// Preferred rendering in text mode.
    #[serde(skip)]
    pub text: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Output of a command: named values, pass/fail checks and warnings, with
/// the precision and tolerances that produced them.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub precision: usize,
    pub tolerances: Tolerances,
    pub entries: Vec<Entry>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, precision: usize, tolerances: Tolerances) -> Self {
        Report {
            command: command.into(),
            precision,
            tolerances,
            entries: Vec::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn put(&mut self, name: &str, value: impl Serialize) {
        self.entries.push(Entry {
            name: name.into(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
            text: None,
        });
    }

    pub fn put_text(&mut self, name: &str, value: impl Serialize, text: String) {
        self.entries.push(Entry {
            name: name.into(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
            text: Some(text),
        });
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut s = String::new();
        let t = &self.tolerances;
        let _ = writeln!(s, "{}", self.command);
        let _ = writeln!(
            s,
            "precision {} bits; tolerances zero {:e}, closure {:e}, search {:e}, rank {:e}",
            self.precision, t.zero, t.closure, t.search, t.rank
        );
        for e in &self.entries {
            match (&e.text, &e.value) {
                (Some(text), _) => {
                    let _ = writeln!(s, "{}:", e.name);
                    for l in text.lines() {
                        let _ = writeln!(s, "  {l}");
                    }
                }
                (None, Value::String(v)) => {
                    let _ = writeln!(s, "{}: {v}", e.name);
                }
                (None, v) => {
                    let _ = writeln!(s, "{}: {v}", e.name);
                }
            }
        }
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        if !self.checks.is_empty() {
            let _ = writeln!(s, "{} of {} checks passed", self.checks.len() - self.failed(), self.checks.len());
        }
        s
    }
}
