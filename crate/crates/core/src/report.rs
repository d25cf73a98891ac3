//! Serializable check results.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    /// Must satisfy `|value| ≤ tolerance`.
    Residual,
    /// Must satisfy `value ≥ -tolerance`.
    Margin,
    /// Informational, always passes.
    Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub label: String,
    pub kind: EntryKind,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

/// Named check with a list of measured residuals, margins and values.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub entries: Vec<CheckEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn residual(&mut self, label: impl Into<String>, value: f64, tolerance: f64) -> &mut Self {
        self.entries.push(CheckEntry {
            label: label.into(),
            kind: EntryKind::Residual,
            value,
            tolerance: Some(tolerance),
            pass: value.abs() <= tolerance,
        });
        self
    }

    pub fn margin(&mut self, label: impl Into<String>, value: f64, tolerance: f64) -> &mut Self {
        self.entries.push(CheckEntry {
            label: label.into(),
            kind: EntryKind::Margin,
            value,
            tolerance: Some(tolerance),
            pass: value >= -tolerance,
        });
        self
    }

    pub fn value(&mut self, label: impl Into<String>, value: f64) -> &mut Self {
        self.entries.push(CheckEntry {
            label: label.into(),
            kind: EntryKind::Value,
            value,
            tolerance: None,
            pass: true,
        });
        self
    }

    /// Boolean recorded as a value entry (1 or 0).
    pub fn flag(&mut self, label: impl Into<String>, on: bool) -> &mut Self {
        self.value(label, if on { 1.0 } else { 0.0 })
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.value)
    }

    /// Largest `|value|` among residual entries.
    pub fn worst_residual(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.kind == EntryKind::Residual)
            .fold(0.0, |m, e| m.max(e.value.abs()))
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
        self.notes.extend(other.notes);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_semantics() {
        let mut r = CheckReport::new("x");
        r.residual("a", -1e-9, 1e-8).margin("b", -1e-9, 1e-8).value("c", -5.0);
        assert!(r.passed());
        r.margin("d", -1e-3, 1e-8);
        assert!(!r.passed());
        assert_eq!(r.get("c"), Some(-5.0));
        assert_eq!(r.worst_residual(), 1e-9);
    }
}
