//! Per-condition residual reports shared by the verification pipelines.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One checked condition, aggregated over all evaluated points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    /// The condition as an equation in plain text.
    #[serde(rename = "paper_eq")]
    pub equation: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// A point left out of a sweep, with the reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skip {
    pub index: usize,
    pub point: Vec<f64>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub case: String,
    pub conditions: Vec<Condition>,
    /// Fitted or fixed constants the residuals depend on.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Skip>,
    /// Conventions a reader needs to interpret the residuals.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn new(case: impl Into<String>) -> Self {
        Self { case: case.into(), ..Self::default() }
    }

    /// Record an upper-bound condition `residual < tolerance`. NaN fails.
    pub fn check(&mut self, name: &str, equation: &str, residual: f64, tolerance: f64) -> &mut Self {
        self.conditions.push(Condition {
            name: name.into(),
            equation: equation.into(),
            max_residual: residual,
            tolerance,
            pass: residual < tolerance,
        });
        self
    }

    /// Record a lower-bound condition, used by negative controls: passes
    /// when `value > threshold`.
    pub fn check_exceeds(&mut self, name: &str, equation: &str, value: f64, threshold: f64) -> &mut Self {
        self.conditions.push(Condition {
            name: name.into(),
            equation: equation.into(),
            max_residual: value,
            tolerance: threshold,
            pass: value > threshold,
        });
        self
    }

    pub fn pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn merge(&mut self, other: ConditionReport) {
        self.conditions.extend(other.conditions);
        self.constants.extend(other.constants);
        self.skipped.extend(other.skipped);
        self.notes.extend(other.notes);
    }
}

/// Running maximum that propagates NaN.
pub fn fold_max(acc: f64, v: f64) -> f64 {
    if acc.is_nan() || v.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}
