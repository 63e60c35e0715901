use super::{beta_of, positive, Body, Runner, SamplePair};
use crate::config::{ExperimentConfig, Scenario};
use crate::report::{Budget, Check, Status};
use crate::{CliError, Result};
use irm_edgestats::{
    bbp_test_with, derive_seed, edge_location, gaussian_baseline, tail_compare, universality_test_with, CoordinateTest,
    EdgeConfig, EdgeError, EdgeReport, EdgeSide, KsResult, MIN_REPLICAS,
};
use irm_ensembles::{Ensemble, EnsembleSpec, EntryLaw, Model};
use irm_profiles::{BandDensity, ProfileSpec};
use serde::Serialize;
use serde_json::{json, Value};

const STRONG_LEVEL: f64 = 0.001;
const MIN_PASS_FRACTION: f64 = 0.95;
const MAX_TAU: f64 = 5.0;

#[derive(Debug, Clone, Serialize)]
pub struct TailPlan {
    pub grid: Vec<f64>,
    pub replicas: usize,
}

/// Fully resolved statistical scenario.
#[derive(Debug, Clone, Serialize)]
pub struct EdgePlan {
    pub scenario: Scenario,
    pub test: EnsembleSpec,
    pub baseline: EnsembleSpec,
    pub edge: EdgeConfig,
    /// Critical spikes; when set the comparison is the spiked one, with the
    /// same spikes on the baseline.
    pub taus: Option<Vec<f64>>,
    pub expect_reject: bool,
    /// Consecutive seeds run from `edge.seed`.
    pub suite_seeds: usize,
    pub tail: Option<TailPlan>,
}

#[derive(Debug, Clone, Serialize)]
struct EdgeSummary {
    seed: u64,
    test_digest: String,
    baseline_digest: String,
    dim: usize,
    k: usize,
    replicas: usize,
    side: EdgeSide,
    edge: f64,
    scale: f64,
    level: f64,
    coordinate_level: f64,
    coordinates: Vec<CoordinateTest>,
    gap: Option<KsResult>,
    min_p: f64,
    reject: bool,
    test_means: Vec<f64>,
    baseline_means: Vec<f64>,
    truncated_fraction: Option<f64>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn summary(seed: u64, r: &EdgeReport) -> EdgeSummary {
    EdgeSummary {
        seed,
        test_digest: r.test.digest.clone(),
        baseline_digest: r.baseline.digest.clone(),
        dim: r.test.dim,
        k: r.test.k,
        replicas: r.test.rescaled.len(),
        side: r.test.side,
        edge: r.test.edge,
        scale: r.test.scale,
        level: r.level,
        coordinate_level: r.coordinate_level,
        coordinates: r.coordinates.clone(),
        gap: r.gap,
        min_p: r.min_p,
        reject: r.reject,
        test_means: (0..r.test.k).map(|i| mean(&r.test.coordinate(i))).collect(),
        baseline_means: (0..r.baseline.k).map(|i| mean(&r.baseline.coordinate(i))).collect(),
        truncated_fraction: r.test.truncated_fraction,
    }
}

fn side_of(s: Option<&str>) -> Result<EdgeSide> {
    match s {
        None | Some("upper") => Ok(EdgeSide::Upper),
        Some("lower") => Ok(EdgeSide::Lower),
        Some(o) => Err(CliError::Config(format!("side must be `upper` or `lower`, got `{o}`"))),
    }
}

fn blocks(config: &ExperimentConfig, d_default: usize, lambda_default: f64, m_default: usize) -> Result<ProfileSpec> {
    let p = &config.params;
    let blocks = positive("blocks", p.blocks.unwrap_or(d_default))?;
    let m = match (p.n, p.block_size) {
        (Some(n), Some(m)) if n != blocks * m => {
            return Err(CliError::Config(format!("n = {n} is not blocks · block_size = {blocks} · {m}")));
        }
        (_, Some(m)) => m,
        (Some(n), None) if n % blocks != 0 => {
            return Err(CliError::Config(format!("n = {n} is not divisible by {blocks} blocks")));
        }
        (Some(n), None) => n / blocks,
        (None, None) => m_default,
    };
    Ok(ProfileSpec::BlockWegner { blocks, m: positive("block_size", m)?, lambda: p.lambda.unwrap_or(lambda_default) })
}

impl EdgePlan {
    pub fn resolve(config: &ExperimentConfig) -> Result<Self> {
        let p = &config.params;
        let scenario = config.scenario;
        let beta = beta_of(p)?;
        let n = positive("n", p.n.unwrap_or(if scenario == Scenario::GoeBaseline { 100 } else { 300 }))?;
        let mut law = EntryLaw::Gaussian;
        let mut model = Model::Wigner;
        let profile = match scenario {
            Scenario::GoeBaseline => ProfileSpec::Uniform { n },
            Scenario::Gw => ProfileSpec::GeneralizedWigner {
                n,
                c: p.c.unwrap_or(0.5),
                cap: p.cap.unwrap_or(2.0),
                seed: derive_seed(config.seed, 7),
            },
            Scenario::Band => {
                let d = positive("d", p.d.unwrap_or(1))?;
                let l = match (p.l, p.n) {
                    (Some(l), Some(n)) if l.checked_pow(d as u32) != Some(n) => {
                        return Err(CliError::Config(format!("n = {n} is not L^d = {l}^{d}")));
                    }
                    (Some(l), _) => l,
                    (None, _) => {
                        let l = (n as f64).powf(1.0 / d as f64).round() as usize;
                        if l.checked_pow(d as u32) != Some(n) {
                            return Err(CliError::Config(format!("n = {n} is not a perfect {d}-th power; set l")));
                        }
                        l
                    }
                };
                let w = p.w.unwrap_or_else(|| (l as f64).powf(0.8).ceil());
                ProfileSpec::Band { d, l: positive("l", l)?, w, density: BandDensity::Gaussian }
            }
            Scenario::Sparse => {
                let theta = p.theta.unwrap_or(4.0);
                law = EntryLaw::ThetaGoe { theta };
                ProfileSpec::SparseHomogeneous { n, theta }
            }
            Scenario::Block => blocks(config, 4, 0.5, 75)?,
            Scenario::CounterexampleBlockdiag => blocks(config, 2, 0.0, 150)?,
            Scenario::Heavy => {
                law = EntryLaw::HeavyTailed { dof: p.dof.unwrap_or(9.0), zeta: p.zeta };
                ProfileSpec::Uniform { n }
            }
            Scenario::Wishart => {
                let alpha = p.alpha.unwrap_or(0.5);
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(CliError::Config(format!("α must lie in (0, 1], got {alpha}")));
                }
                model = Model::Wishart;
                let m = ((alpha * n as f64).round() as usize).max(1);
                ProfileSpec::Wishart { m, n, width: Some(p.w.unwrap_or(0.3)) }
            }
            _ => unreachable!("not a statistical scenario"),
        };
        let test = EnsembleSpec { beta, entry_law: law, profile, deformation: None, model, seed: 0 };
        let ensemble = Ensemble::new(test.clone())?;
        let baseline = gaussian_baseline(&test)?;
        Ensemble::new(baseline.clone())?;
        let side = side_of(p.side.as_deref())?;
        edge_location(&ensemble, side)?;
        let edge = EdgeConfig {
            k: positive("k", p.k.unwrap_or(2))?,
            replicas: p.replicas.unwrap_or(1000),
            seed: config.seed,
            level: p.level.unwrap_or(0.01),
            side,
        };
        if !(edge.level > 0.0 && edge.level < 1.0) {
            return Err(CliError::Config(format!("level must lie in (0, 1), got {}", edge.level)));
        }
        let k_eff = p.taus.as_ref().map_or(edge.k, |t| t.len() + 1);
        if k_eff > ensemble.dim() {
            return Err(CliError::Config(format!("k = {k_eff} exceeds the dimension {}", ensemble.dim())));
        }
        if let Some(t) = p.taus.iter().flatten().find(|t| !(t.abs() <= MAX_TAU)) {
            return Err(CliError::Config(format!("|τ| must be at most {MAX_TAU}, got {t}")));
        }
        let tail = match &p.tail_grid {
            None => None,
            Some(grid) => {
                if grid.is_empty() || grid.iter().any(|x| !(*x >= 0.0)) || grid.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::Config("tail_grid must be a nonempty ascending list of x ≥ 0".into()));
                }
                Some(TailPlan { grid: grid.clone(), replicas: positive("tail_replicas", p.tail_replicas.unwrap_or(2000))? })
            }
        };
        Ok(EdgePlan {
            scenario,
            test,
            baseline,
            edge,
            taus: p.taus.clone(),
            expect_reject: scenario == Scenario::CounterexampleBlockdiag,
            suite_seeds: positive("suite_seeds", p.suite_seeds.unwrap_or(1))?,
            tail,
        })
    }

    fn dim(&self) -> f64 {
        match self.test.profile {
            ProfileSpec::Wishart { n, .. } => n as f64,
            _ => Ensemble::new(self.test.clone()).map_or(0.0, |e| e.dim() as f64),
        }
    }

    pub fn budget(&self) -> Budget {
        let per = self.dim().powi(3);
        let draws = 2.0 * (self.edge.replicas * self.suite_seeds) as f64 + self.tail.as_ref().map_or(0.0, |t| 2.0 * t.replicas as f64);
        Budget { unit: "N^3 eigen-solve units".into(), estimate: draws * per, limit: super::STAT_BUDGET }
    }

    pub fn criteria(&self) -> Value {
        let k = self.taus.as_ref().map_or(self.edge.k, |t| t.len() + 1);
        json!({
            "statistic": "two-sample Kolmogorov-Smirnov on each rescaled extreme eigenvalue",
            "level": self.edge.level,
            "bonferroni_coordinates": k,
            "coordinate_level": self.edge.level / k as f64,
            "min_replicas": MIN_REPLICAS,
            "expect_reject": self.expect_reject,
            "strong_level_first_coordinate": if self.expect_reject { Some(STRONG_LEVEL) } else { None },
            "min_pass_fraction": if self.suite_seeds > 1 { Some(MIN_PASS_FRACTION) } else { None },
            "tail": self.tail.as_ref().map(|_| json!({
                "wilson_confidence": 0.95,
                "separation": "Wilson intervals at the first and last grid points do not overlap",
                "match": "|z| within the Bonferroni critical value over the grid at level 0.01",
            })),
        })
    }

    fn success(&self, r: &EdgeReport) -> bool {
        if self.expect_reject {
            r.reject && r.coordinates[0].ks.p_value < STRONG_LEVEL
        } else {
            !r.reject
        }
    }

    pub(crate) fn run(&self, runner: &mut Runner) -> Result<Body> {
        if self.edge.replicas < MIN_REPLICAS {
            let mut body = Body::new(vec![]);
            body.status = Some(Status::Inconclusive);
            body.message = format!("low power: {} replicas, at least {MIN_REPLICAS} needed", self.edge.replicas);
            return Ok(body);
        }
        let mut reports = vec![];
        for i in 0..self.suite_seeds {
            let cfg = EdgeConfig { seed: self.edge.seed.wrapping_add(i as u64), ..self.edge };
            let mut sampler = |s: &EnsembleSpec, k, r, side| runner.samples(s, k, r, side);
            let r = match &self.taus {
                Some(t) => bbp_test_with(&self.test, t, true, &cfg, &mut sampler),
                None => universality_test_with(&self.test, &self.baseline, &cfg, &mut sampler),
            };
            match r {
                Ok(r) => reports.push((cfg.seed, r)),
                Err(EdgeError::Power { replicas, min }) => {
                    let mut body = Body::new(vec![]);
                    body.status = Some(Status::Inconclusive);
                    body.message = format!("low power: {replicas} replicas, at least {min} needed");
                    return Ok(body);
                }
                Err(e) => return Err(e.into()),
            }
        }
        let mut checks = vec![];
        let (seed0, first) = &reports[0];
        let mut message = String::new();
        if self.suite_seeds == 1 {
            let s = summary(*seed0, first);
            if self.expect_reject {
                let p1 = first.coordinates[0].ks.p_value;
                checks.push(Check::new("KS rejection on λ_1 with p < 0.001", p1 < STRONG_LEVEL, p1, STRONG_LEVEL).with(&s));
                checks.push(Check::new("family-wise KS rejection", first.reject, first.min_p, first.coordinate_level));
                message = if self.success(first) {
                    "rejection expected and observed".into()
                } else {
                    "rejection expected but not observed".into()
                };
            } else {
                let name = format!("no KS rejection at level {} (Bonferroni over k = {})", first.level, first.coordinates.len());
                checks.push(Check::new(name, !first.reject, first.min_p, first.coordinate_level).with(&s));
            }
        } else {
            let per_seed: Vec<EdgeSummary> = reports.iter().map(|(s, r)| summary(*s, r)).collect();
            let ok = reports.iter().filter(|(_, r)| self.success(r)).count();
            let frac = ok as f64 / reports.len() as f64;
            let name = format!("{} at ≥ 95% of {} seeds", if self.expect_reject { "rejection" } else { "no rejection" }, reports.len());
            checks.push(Check::new(name, frac >= MIN_PASS_FRACTION, frac, MIN_PASS_FRACTION).with(&per_seed));
            message = format!("{ok} of {} seeds behaved as expected", reports.len());
        }
        if let Some(t) = &self.tail {
            let c = tail_compare(&self.test, &t.grid, t.replicas, derive_seed(self.edge.seed, 3))?;
            let last = t.grid.len() - 1;
            let (lo_first, hi_last) = (c.test.wilson[0][0], c.test.wilson[last][1]);
            checks.push(Check::new("tail survival is monotone decreasing", c.test.monotone, c.test.survival[last], c.test.survival[0]).with(&c.test));
            checks.push(Check::new(
                format!("Wilson intervals separated between x = {} and x = {}", t.grid[0], t.grid[last]),
                c.separated,
                lo_first,
                hi_last,
            ));
            let zmax = c.z_scores.iter().map(|z| z.abs()).fold(0.0, f64::max);
            checks.push(Check::new("tail matches the Gaussian baseline within MC error", c.matches, zmax, c.z_critical).with(&c));
        }
        let mut body = Body::new(checks);
        body.message = message;
        body.samples = vec![SamplePair { label: format!("seed-{seed0}"), test: first.test.clone(), baseline: first.baseline.clone() }];
        Ok(body)
    }
}
