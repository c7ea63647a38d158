//! Structured pass/fail reports for identity checks.

use std::fmt;

use serde::Serialize;

/// One checked identity. On failure the witness shows the first
/// nonzero residual, printed in the expression grammar.
#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub label: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckItem {
    pub fn pass(label: impl Into<String>) -> Self {
        CheckItem {
            label: label.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(label: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckItem {
            label: label.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.name)?;
        for item in &self.items {
            let status = if item.passed { "ok" } else { "FAIL" };
            write!(f, "  [{status}] {}", item.label)?;
            if let Some(w) = &item.witness {
                write!(f, "  residual: {}", w)?;
            }
            writeln!(f)?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "  => {}", verdict)
    }
}
