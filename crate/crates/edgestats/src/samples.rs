use crate::spectrum::{extreme_eigenvalues, matrix_digest, spectrum, EdgeSide};
use crate::universality::spec_digest;
use crate::{EdgeError, Result};
use irm_ensembles::{Ensemble, EnsembleSpec, Model};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Every this many replicas, the bisection eigenvalues are compared with a
/// full residual-checked decomposition.
pub const SPOT_CHECK_STRIDE: u64 = 250;

/// Largest `α` for which the lower Wishart edge is used.
const LOWER_EDGE_MAX_ALPHA: f64 = 0.9;

/// Extreme eigenvalues of one ensemble over a range of replicas, with the
/// rescaling that maps them to the Tracy–Widom scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSamples {
    pub spec: EnsembleSpec,
    pub digest: String,
    pub dim: usize,
    pub side: EdgeSide,
    /// `rescaled = scale · (λ − edge)`.
    pub edge: f64,
    pub scale: f64,
    pub k: usize,
    /// Per replica, ordered from the edge inward.
    pub extremes: Vec<Vec<f64>>,
    pub rescaled: Vec<Vec<f64>>,
    /// Mean fraction of entries removed by heavy-tail truncation.
    pub truncated_fraction: Option<f64>,
}

impl EdgeSamples {
    /// Rescaled values of coordinate `i` (0-based) across replicas.
    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.rescaled.iter().map(|r| r[i]).collect()
    }

    /// Rescaled gap between the first two coordinates.
    pub fn gap(&self) -> Option<Vec<f64>> {
        (self.k >= 2).then(|| self.rescaled.iter().map(|r| (r[0] - r[1]).abs()).collect())
    }

    pub fn unscale(&self, r: f64) -> f64 {
        self.edge + r / self.scale
    }
}

/// `(edge, N)` for the ensemble: `±2` for Wigner matrices and
/// `(1 ± √α)²` for Wishart matrices, where `N` sets the `N^{2/3}` scale.
pub fn edge_location(ensemble: &Ensemble, side: EdgeSide) -> Result<(f64, usize)> {
    let p = ensemble.profile();
    match ensemble.spec().model {
        Model::Wigner => Ok((if side == EdgeSide::Upper { 2.0 } else { -2.0 }, p.n())),
        Model::Wishart => {
            let a = p.alpha();
            if side == EdgeSide::Lower && a > LOWER_EDGE_MAX_ALPHA {
                return Err(EdgeError::Domain(format!(
                    "the lower Wishart edge is only used for α <= {LOWER_EDGE_MAX_ALPHA}, got α = {a}"
                )));
            }
            let s = if side == EdgeSide::Upper { 1.0 } else { -1.0 };
            Ok(((1.0 + s * a.sqrt()).powi(2), p.n_cols()))
        }
    }
}

/// Samples replicas `0..replicas` of `spec` in parallel; results land in
/// fixed slots, so the output does not depend on the thread count.
pub fn sample_edges(spec: &EnsembleSpec, k: usize, replicas: usize, side: EdgeSide) -> Result<EdgeSamples> {
    let ensemble = Ensemble::new(spec.clone())?;
    let dim = ensemble.dim();
    if k == 0 || k > dim {
        return Err(EdgeError::Domain(format!("need 1 <= k <= {dim}, got {k}")));
    }
    let (edge, n_scale) = edge_location(&ensemble, side)?;
    let scale = (n_scale as f64).powf(2.0 / 3.0);
    let draws: Vec<(Vec<f64>, Option<f64>)> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let s = ensemble.sample(r)?;
            let ext = extreme_eigenvalues(&s.matrix, k, side)?;
            if r % SPOT_CHECK_STRIDE == 0 {
                let full = spectrum(&s.matrix)?;
                let norm = full[0].abs().max(full[dim - 1].abs()).max(1.0);
                for (j, v) in ext.iter().enumerate() {
                    let w = if side == EdgeSide::Upper { full[j] } else { full[dim - 1 - j] };
                    if (v - w).abs() > 1e-9 * norm {
                        return Err(EdgeError::Numerical {
                            digest: matrix_digest(&s.matrix),
                            detail: format!("bisection eigenvalue {v} disagrees with full decomposition {w}"),
                        });
                    }
                }
            }
            Ok((ext, s.truncated_fraction))
        })
        .collect::<Result<_>>()?;
    let truncated_fraction = if draws.iter().all(|d| d.1.is_some()) && !draws.is_empty() {
        Some(draws.iter().map(|d| d.1.unwrap_or(0.0)).sum::<f64>() / draws.len() as f64)
    } else {
        None
    };
    let extremes: Vec<Vec<f64>> = draws.into_iter().map(|d| d.0).collect();
    let rescaled = extremes.iter().map(|e| e.iter().map(|v| scale * (v - edge)).collect()).collect();
    Ok(EdgeSamples {
        spec: spec.clone(),
        digest: spec_digest(spec),
        dim,
        side,
        edge,
        scale,
        k,
        extremes,
        rescaled,
        truncated_fraction,
    })
}
