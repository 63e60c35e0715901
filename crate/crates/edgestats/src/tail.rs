use crate::spectrum::extreme_pair;
use crate::universality::{derive_seed, gaussian_baseline, spec_digest};
use crate::{EdgeError, Result};
use irm_ensembles::{Ensemble, EnsembleSpec, Model};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

const CONFIDENCE: f64 = 0.95;
const COMPARISON_LEVEL: f64 = 0.01;

fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Wilson score interval for `successes` out of `n` at `confidence`.
pub fn wilson_interval(successes: usize, n: usize, confidence: f64) -> Result<[f64; 2]> {
    if n == 0 || successes > n || !(confidence > 0.0 && confidence < 1.0) {
        return Err(EdgeError::Domain(format!("Wilson interval for {successes}/{n} at {confidence}")));
    }
    let z = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
    let (nf, p) = (n as f64, successes as f64 / n as f64);
    let denom = 1.0 + z * z / nf;
    let centre = (p + z * z / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt() / denom;
    Ok([(centre - half).max(0.0), (centre + half).min(1.0)])
}

/// Empirical `P(‖X/2‖ > 1 + x N^{−2/3})` over a grid of `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailTable {
    pub digest: String,
    pub dim: usize,
    pub replicas: usize,
    pub x_grid: Vec<f64>,
    pub exceed: Vec<usize>,
    pub survival: Vec<f64>,
    pub confidence: f64,
    pub wilson: Vec<[f64; 2]>,
    pub monotone: bool,
}

fn check_grid(x_grid: &[f64]) -> Result<()> {
    if x_grid.is_empty() || x_grid.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(EdgeError::Domain("x grid must be nonempty, finite and nonnegative".into()));
    }
    if x_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EdgeError::Domain("x grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Tail table for replicas `0..replicas` of `spec` drawn with `seed`.
pub fn tail_estimate(spec: &EnsembleSpec, x_grid: &[f64], replicas: usize, seed: u64) -> Result<TailTable> {
    check_grid(x_grid)?;
    if replicas == 0 {
        return Err(EdgeError::Domain("at least one replica is needed".into()));
    }
    if spec.model != Model::Wigner {
        return Err(EdgeError::Domain("the norm tail is defined for Wigner-type ensembles".into()));
    }
    let mut spec = spec.clone();
    spec.seed = seed;
    let ensemble = Ensemble::new(spec.clone())?;
    let n = ensemble.dim();
    let norms: Vec<f64> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let x = ensemble.sample(r)?.matrix;
            let (bottom, top) = extreme_pair(&x)?;
            Ok(top.max(-bottom) / 2.0)
        })
        .collect::<Result<_>>()?;
    let shrink = (n as f64).powf(-2.0 / 3.0);
    let exceed: Vec<usize> = x_grid.iter().map(|x| norms.iter().filter(|&&v| v > 1.0 + x * shrink).count()).collect();
    let survival: Vec<f64> = exceed.iter().map(|&c| c as f64 / replicas as f64).collect();
    let wilson = exceed.iter().map(|&c| wilson_interval(c, replicas, CONFIDENCE)).collect::<Result<_>>()?;
    Ok(TailTable {
        digest: spec_digest(&spec),
        dim: n,
        replicas,
        x_grid: x_grid.to_vec(),
        monotone: survival.windows(2).all(|w| w[1] <= w[0]),
        exceed,
        survival,
        confidence: CONFIDENCE,
        wilson,
    })
}

/// Tail of a test ensemble next to its Gaussian baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailComparison {
    pub test: TailTable,
    pub baseline: TailTable,
    /// Two-proportion z-scores, test minus baseline, pooled variance.
    pub z_scores: Vec<f64>,
    /// Bonferroni critical value over the grid at level 0.01.
    pub z_critical: f64,
    /// No grid point has the test tail significantly above the baseline.
    pub dominated: bool,
    /// No grid point differs significantly in either direction.
    pub matches: bool,
    /// The Wilson intervals at the first and last grid points are disjoint.
    pub separated: bool,
}

/// Tail table of `spec` and of the same-size Gaussian ensemble, on
/// disjoint seeds derived from `seed`.
pub fn tail_compare(spec: &EnsembleSpec, x_grid: &[f64], replicas: usize, seed: u64) -> Result<TailComparison> {
    let baseline_spec = gaussian_baseline(spec)?;
    let test = tail_estimate(spec, x_grid, replicas, derive_seed(seed, 0))?;
    let baseline = tail_estimate(&baseline_spec, x_grid, replicas, derive_seed(seed, 1))?;
    let z_critical = normal_quantile(1.0 - COMPARISON_LEVEL / (2.0 * x_grid.len() as f64));
    let nf = replicas as f64;
    let z_scores: Vec<f64> = test
        .exceed
        .iter()
        .zip(&baseline.exceed)
        .map(|(&a, &b)| {
            let pooled = (a + b) as f64 / (2.0 * nf);
            let se = (pooled * (1.0 - pooled) * 2.0 / nf).sqrt();
            if se == 0.0 {
                0.0
            } else {
                (a as f64 - b as f64) / nf / se
            }
        })
        .collect();
    let last = x_grid.len() - 1;
    Ok(TailComparison {
        dominated: z_scores.iter().all(|&z| z <= z_critical),
        matches: z_scores.iter().all(|z| z.abs() <= z_critical),
        separated: test.wilson[0][0] > test.wilson[last][1],
        z_scores,
        z_critical,
        test,
        baseline,
    })
}
