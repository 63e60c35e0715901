use crate::config::ExperimentConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Horizon-limited or underpowered; nothing was decided.
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Inconclusive => 3,
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }
}

/// One verified statement with the number it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Observed value (error, p-value, residual...).
    pub value: f64,
    /// Threshold the value was compared against.
    pub threshold: f64,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, value: f64, threshold: f64) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        Check { name: name.into(), status, value, threshold, detail: Value::Null }
    }

    pub fn with(mut self, detail: impl Serialize) -> Self {
        self.detail = serde_json::to_value(detail).unwrap_or(Value::Null);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Cost declared before any work starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub unit: String,
    pub estimate: f64,
    pub limit: f64,
}

/// Deterministic payload of `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    /// Parameters after defaults were filled in.
    pub resolved: Value,
    /// Decision rules, levels and tolerances the checks used.
    pub criteria: Value,
    pub budget: Budget,
    pub checks: Vec<Check>,
    pub status: Status,
    pub message: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
