use super::{positive, Body};
use crate::config::ExperimentConfig;
use crate::report::{Budget, Check};
use crate::{CliError, Result};
use irm_edgestats::{derive_seed, random_lift_check, LIFT_TOLERANCE};
use serde::Serialize;
use serde_json::{json, Value};

const DEGREES: [usize; 3] = [2, 4, 8];

#[derive(Debug, Clone, Serialize)]
pub struct LiftCase {
    pub n: usize,
    pub degree: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftPlan {
    pub cases: Vec<LiftCase>,
}

impl LiftPlan {
    pub fn resolve(config: &ExperimentConfig) -> Result<Self> {
        let p = &config.params;
        let graphs = positive("graphs", p.graphs.unwrap_or(50))?;
        let n_max = p.n.unwrap_or(64);
        let cases = (0..graphs)
            .map(|i| {
                let degree = p.degree.unwrap_or(DEGREES[i % 3]);
                // Cycle through n_max/4, n_max/2 and n_max, kept above the degree.
                let mut n = (n_max >> (2 - (i / 3) % 3)).max(degree + 1);
                if n * degree % 2 == 1 {
                    n += 1;
                }
                if n > n_max || degree == 0 {
                    return Err(CliError::Config(format!("no simple {degree}-regular graph with at most {n_max} vertices")));
                }
                Ok(LiftCase { n, degree, seed: derive_seed(config.seed, 100 + i as u64) })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LiftPlan { cases })
    }

    pub fn budget(&self) -> Budget {
        let estimate = self.cases.iter().map(|c| (2.0 * c.n as f64).powi(3)).sum();
        Budget { unit: "dense eigen-solve flops (order of magnitude)".into(), estimate, limit: 1e12 }
    }

    pub fn criteria(&self) -> Value {
        json!({
            "identity": "sorted Spec(lift) equals sorted Spec(G) ⊎ Spec(σ∘G), and traces agree",
            "tolerance": LIFT_TOLERANCE,
        })
    }

    pub(crate) fn run(&self) -> Result<Body> {
        let checks = self
            .cases
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let r = random_lift_check(c.n, c.degree, c.seed)?;
                let name = format!("2-lift {i}: n = {}, d = {}", c.n, c.degree);
                Ok(Check::new(name, r.passed, r.max_deviation, LIFT_TOLERANCE).with(&r))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Body::new(checks))
    }
}
