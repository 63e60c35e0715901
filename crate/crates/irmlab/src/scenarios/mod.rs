pub mod audit;
pub mod edge;
pub mod exact;
pub mod lift;

use crate::config::{ExperimentConfig, Params, Scenario};
use crate::report::{Budget, Check, Report, Status};
use crate::{CliError, Result};
use irm_edgestats::{sample_edges, spec_digest, EdgeSamples, EdgeSide};
use irm_ensembles::{Beta, EnsembleSpec};
use serde::Serialize;
use serde_json::Value;
use std::collections::HashMap;

pub use edge::EdgePlan;

/// Limit on the declared cost of a statistical scenario, in units of
/// `N³` eigen-solves summed over replicas (about 8 minutes on one core).
pub const STAT_BUDGET: f64 = 1e12;

/// Test and baseline samples of one comparison, for CSV and SVG output.
#[derive(Debug, Clone)]
pub struct SamplePair {
    pub label: String,
    pub test: EdgeSamples,
    pub baseline: EdgeSamples,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub samples: Vec<SamplePair>,
}

type CacheKey = (String, usize, usize, EdgeSide);

/// Runs scenarios, sharing edge samples between runs with identical
/// ensembles (a common GOE baseline is drawn only once).
#[derive(Debug, Default)]
pub struct Runner {
    cache: HashMap<CacheKey, EdgeSamples>,
}

/// Intermediate result of a scenario body.
pub(crate) struct Body {
    pub checks: Vec<Check>,
    pub samples: Vec<SamplePair>,
    pub message: String,
    /// Overrides the status derived from the checks.
    pub status: Option<Status>,
}

impl Body {
    pub fn new(checks: Vec<Check>) -> Self {
        Body { checks, samples: vec![], message: String::new(), status: None }
    }
}

pub(crate) fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub(crate) fn beta_of(p: &Params) -> Result<Beta> {
    Beta::try_from(p.beta.unwrap_or(1)).map_err(CliError::Config)
}

pub(crate) fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        return Err(CliError::Config(format!("{name} must be positive")));
    }
    Ok(v)
}

impl Runner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Draws edge samples, reusing an earlier draw of the same ensemble.
    pub fn samples(&mut self, spec: &EnsembleSpec, k: usize, replicas: usize, side: EdgeSide) -> irm_edgestats::Result<EdgeSamples> {
        let key = (spec_digest(spec), k, replicas, side);
        if let Some(s) = self.cache.get(&key) {
            return Ok(s.clone());
        }
        let s = sample_edges(spec, k, replicas, side)?;
        self.cache.insert(key, s.clone());
        Ok(s)
    }

    /// Validates, budgets and runs one scenario.
    pub fn run(&mut self, config: &ExperimentConfig) -> Result<Outcome> {
        config.check_keys()?;
        let mut stored = config.clone();
        stored.output = None;
        let (resolved, criteria, budget, body) = match config.scenario {
            s if s.is_statistical() => {
                let plan = EdgePlan::resolve(config)?;
                let budget = plan.budget();
                guard(&budget)?;
                let body = plan.run(self)?;
                (to_value(&plan), plan.criteria(), budget, body)
            }
            Scenario::Lift2 => {
                let plan = lift::LiftPlan::resolve(config)?;
                let budget = plan.budget();
                guard(&budget)?;
                (to_value(&plan), plan.criteria(), budget, plan.run()?)
            }
            Scenario::DiagramsExact => {
                let plan = exact::DiagramsPlan::resolve(config)?;
                let budget = plan.budget();
                guard(&budget)?;
                (to_value(&plan), plan.criteria(), budget, plan.run()?)
            }
            Scenario::NbpathExact => {
                let plan = exact::NbpathPlan::resolve(config)?;
                let budget = plan.budget();
                guard(&budget)?;
                (to_value(&plan), plan.criteria(), budget, plan.run()?)
            }
            Scenario::MixingAudit => {
                let plan = audit::MixingPlan::resolve(config)?;
                let budget = plan.budget();
                guard(&budget)?;
                (to_value(&plan), plan.criteria(), budget, plan.run()?)
            }
            _ => unreachable!("every scenario is statistical or handled above"),
        };
        let derived = body.checks.iter().fold(Status::Pass, |acc, c| acc.combine(c.status));
        let status = body.status.unwrap_or(if body.checks.is_empty() { Status::Inconclusive } else { derived });
        let message = if body.message.is_empty() {
            let failed = body.checks.iter().filter(|c| c.status == Status::Fail).count();
            format!("{} of {} checks passed", body.checks.len() - failed, body.checks.len())
        } else {
            body.message
        };
        let report = Report {
            tool: "irmlab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: stored,
            resolved,
            criteria,
            budget,
            checks: body.checks,
            status,
            message,
        };
        Ok(Outcome { report, samples: body.samples })
    }
}

fn guard(b: &Budget) -> Result<()> {
    if !(b.estimate <= b.limit) {
        return Err(CliError::Config(format!(
            "declared cost {:.3e} {} exceeds the desk-scale budget {:.3e}",
            b.estimate, b.unit, b.limit
        )));
    }
    Ok(())
}
