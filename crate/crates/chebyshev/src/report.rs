use serde::{Deserialize, Serialize};

/// Outcome of an exhaustive identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub cases: usize,
    /// First few failing cases, rendered for humans.
    pub failures: Vec<String>,
    pub failure_count: usize,
}

const KEEP: usize = 8;

impl IdentityReport {
    pub fn new(name: &str) -> Self {
        IdentityReport { name: name.into(), cases: 0, failures: vec![], failure_count: 0 }
    }

    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < KEEP {
                self.failures.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.cases > 0
    }
}
