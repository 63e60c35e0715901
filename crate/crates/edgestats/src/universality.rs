use crate::ks::{ks_two_sample, KsResult};
use crate::samples::{sample_edges, EdgeSamples};
use crate::spectrum::EdgeSide;
use crate::{EdgeError, Result};
use irm_ensembles::{Basis, Deformation, Ensemble, EnsembleSpec, EntryLaw, Model};
use irm_profiles::ProfileSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Fewest replicas a comparison accepts.
pub const MIN_REPLICAS: usize = 100;

const MAX_TAU: f64 = 5.0;

/// Short SHA-256 digest of the canonical JSON form of a spec.
pub fn spec_digest(spec: &EnsembleSpec) -> String {
    let json = serde_json::to_vec(spec).unwrap_or_default();
    Sha256::digest(&json).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Independent seed for stream `role` of a run (splitmix64 finalizer).
pub fn derive_seed(seed: u64, role: u64) -> u64 {
    let mut z = seed.wrapping_mul(2).wrapping_add(role).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub k: usize,
    pub replicas: usize,
    pub seed: u64,
    /// Family-wise rejection level, split over the `k` coordinates.
    pub level: f64,
    pub side: EdgeSide,
}

impl Default for EdgeConfig {
    fn default() -> Self {
        EdgeConfig { k: 2, replicas: 1000, seed: 0, level: 0.01, side: EdgeSide::Upper }
    }
}

impl EdgeConfig {
    fn validate(&self) -> Result<()> {
        if self.replicas < MIN_REPLICAS {
            return Err(EdgeError::Power { replicas: self.replicas, min: MIN_REPLICAS });
        }
        if self.k == 0 {
            return Err(EdgeError::Domain("k must be positive".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(EdgeError::Domain(format!("level must lie in (0, 1), got {}", self.level)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordinateTest {
    /// 1-based index counted from the edge.
    pub index: usize,
    pub ks: KsResult,
    pub reject: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub test: EdgeSamples,
    pub baseline: EdgeSamples,
    pub level: f64,
    /// Per-coordinate level after the Bonferroni split.
    pub coordinate_level: f64,
    pub coordinates: Vec<CoordinateTest>,
    /// KS comparison of `|λ₁ − λ₂|`, reported but not part of the decision.
    pub gap: Option<KsResult>,
    pub min_p: f64,
    pub reject: bool,
}

/// Per-coordinate KS tests of two sample sets with Bonferroni correction.
pub fn compare(test: &EdgeSamples, baseline: &EdgeSamples, level: f64, seed: u64) -> Result<EdgeReport> {
    if test.k != baseline.k || test.side != baseline.side {
        return Err(EdgeError::Domain("samples differ in k or edge side".into()));
    }
    if test.dim != baseline.dim {
        return Err(EdgeError::Domain(format!("dimensions differ: {} vs {}", test.dim, baseline.dim)));
    }
    let coordinate_level = level / test.k as f64;
    let coordinates = (0..test.k)
        .map(|i| {
            let ks = ks_two_sample(&test.coordinate(i), &baseline.coordinate(i), derive_seed(seed, 16 + i as u64))?;
            Ok(CoordinateTest { index: i + 1, ks, reject: ks.p_value < coordinate_level })
        })
        .collect::<Result<Vec<_>>>()?;
    let gap = match (test.gap(), baseline.gap()) {
        (Some(a), Some(b)) => Some(ks_two_sample(&a, &b, derive_seed(seed, 15))?),
        _ => None,
    };
    let min_p = coordinates.iter().map(|c| c.ks.p_value).fold(1.0, f64::min);
    Ok(EdgeReport {
        test: test.clone(),
        baseline: baseline.clone(),
        level,
        coordinate_level,
        reject: coordinates.iter().any(|c| c.reject),
        coordinates,
        gap,
        min_p,
    })
}

fn spectrum_of(d: &Option<Deformation>) -> (Vec<f64>, Vec<f64>) {
    d.as_ref().map_or((vec![], vec![]), |d| (d.spikes.clone(), d.bulk.clone()))
}

fn with_seed(spec: &EnsembleSpec, seed: u64) -> EnsembleSpec {
    let mut s = spec.clone();
    s.seed = seed;
    s
}

/// Source of edge samples; [`sample_edges`] or a caching wrapper around it.
pub type Sampler<'a> = dyn FnMut(&EnsembleSpec, usize, usize, EdgeSide) -> Result<EdgeSamples> + 'a;

/// Compares the extreme eigenvalues of `test` against `baseline` at equal
/// `N`. The two ensembles get disjoint seeds derived from `config.seed`.
pub fn universality_test(test: &EnsembleSpec, baseline: &EnsembleSpec, config: &EdgeConfig) -> Result<EdgeReport> {
    universality_test_with(test, baseline, config, &mut sample_edges)
}

/// [`universality_test`] drawing its samples through `sampler`.
pub fn universality_test_with(
    test: &EnsembleSpec,
    baseline: &EnsembleSpec,
    config: &EdgeConfig,
    sampler: &mut Sampler<'_>,
) -> Result<EdgeReport> {
    config.validate()?;
    let (t, b) = (Ensemble::new(test.clone())?, Ensemble::new(baseline.clone())?);
    if t.dim() != b.dim() || test.model != baseline.model {
        return Err(EdgeError::Domain(format!(
            "test and baseline must share N and model ({} {:?} vs {} {:?})",
            t.dim(),
            test.model,
            b.dim(),
            baseline.model
        )));
    }
    if spectrum_of(&test.deformation) != spectrum_of(&baseline.deformation) {
        return Err(EdgeError::Domain("test and baseline deformation spectra differ".into()));
    }
    run(test, baseline, config, sampler)
}

fn run(test: &EnsembleSpec, baseline: &EnsembleSpec, config: &EdgeConfig, sampler: &mut Sampler<'_>) -> Result<EdgeReport> {
    let ts = sampler(&with_seed(test, derive_seed(config.seed, 0)), config.k, config.replicas, config.side)?;
    let bs = sampler(&with_seed(baseline, derive_seed(config.seed, 1)), config.k, config.replicas, config.side)?;
    compare(&ts, &bs, config.level, config.seed)
}

/// Gaussian mean-field ensemble of the same size, symmetry class and model.
pub fn gaussian_baseline(spec: &EnsembleSpec) -> Result<EnsembleSpec> {
    let p = spec.profile.build()?;
    let profile = match spec.model {
        Model::Wigner => ProfileSpec::Uniform { n: p.n() },
        Model::Wishart => ProfileSpec::Wishart { m: p.n_rows(), n: p.n_cols(), width: None },
    };
    Ok(EnsembleSpec { beta: spec.beta, entry_law: EntryLaw::Gaussian, profile, deformation: None, model: spec.model, seed: spec.seed })
}

/// Spiked comparison on the top `q + 1` coordinates. The test ensemble is
/// `spec` with critical spikes `τ_j`; the baseline is the Gaussian ensemble
/// of the same size, carrying the same spikes when `matched` and none
/// otherwise.
pub fn bbp_test(spec: &EnsembleSpec, taus: &[f64], matched: bool, config: &EdgeConfig) -> Result<EdgeReport> {
    bbp_test_with(spec, taus, matched, config, &mut sample_edges)
}

/// [`bbp_test`] drawing its samples through `sampler`.
pub fn bbp_test_with(
    spec: &EnsembleSpec,
    taus: &[f64],
    matched: bool,
    config: &EdgeConfig,
    sampler: &mut Sampler<'_>,
) -> Result<EdgeReport> {
    if let Some(t) = taus.iter().find(|t| !(t.abs() <= MAX_TAU)) {
        return Err(EdgeError::Domain(format!("|τ| must be at most {MAX_TAU}, got {t}")));
    }
    let mut config = *config;
    config.k = taus.len() + 1;
    config.validate()?;
    let basis = spec.deformation.as_ref().map_or(Basis::Random { seed: derive_seed(config.seed, 2) }, |d| d.basis);
    let deformation = (!taus.is_empty()).then(|| Deformation { spikes: taus.to_vec(), bulk: vec![], basis });
    let mut test = spec.clone();
    test.deformation = deformation.clone();
    let mut baseline = gaussian_baseline(spec)?;
    if matched {
        baseline.deformation = deformation;
    }
    run(&test, &baseline, &config, sampler)
}
