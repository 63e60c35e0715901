use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Radially symmetric probability densities on R^d used to build band profiles.
///
/// Every variant is even and integrates to one, so the band profile it
/// generates is symmetric with unit row sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum BandDensity {
    /// Standard Gaussian kernel `(2π)^{-d/2} exp(-|x|²/2)`.
    Gaussian,
    /// Compactly supported `(1 - |x|²)_+`, normalized.
    Bump,
    /// Heavy tail `(1 + |x|²)^{-(d+α)/2}` with `α ∈ (0, 2)`.
    PowerLaw { alpha: f64 },
}

fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    PI.powf(h) / gamma(h + 1.0)
}

impl BandDensity {
    /// Normalizing constant in dimension `d`.
    fn norm(&self, d: usize) -> f64 {
        let df = d as f64;
        match *self {
            BandDensity::Gaussian => (2.0 * PI).powf(-df / 2.0),
            BandDensity::Bump => 1.0 / (unit_ball_volume(d) * 2.0 / (df + 2.0)),
            BandDensity::PowerLaw { alpha } => {
                gamma((df + alpha) / 2.0) / (PI.powf(df / 2.0) * gamma(alpha / 2.0))
            }
        }
    }

    /// Evaluates `f(x)` for a point given by its squared Euclidean norm.
    pub fn eval_sq(&self, d: usize, r2: f64) -> f64 {
        let c = self.norm(d);
        match *self {
            BandDensity::Gaussian => c * (-0.5 * r2).exp(),
            BandDensity::Bump => {
                if r2 < 1.0 {
                    c * (1.0 - r2)
                } else {
                    0.0
                }
            }
            BandDensity::PowerLaw { alpha } => c * (1.0 + r2).powf(-(d as f64 + alpha) / 2.0),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_sq(x.len(), x.iter().map(|v| v * v).sum())
    }

    /// Small-frequency exponent: `1 - f̂(p) ≍ |p|^α` near the origin.
    pub fn stable_exponent(&self) -> f64 {
        match *self {
            BandDensity::Gaussian | BandDensity::Bump => 2.0,
            BandDensity::PowerLaw { alpha } => alpha,
        }
    }

    /// Radius beyond which `f` is negligible (or exactly zero).
    pub(crate) fn support_radius(&self) -> Option<f64> {
        match *self {
            BandDensity::Gaussian => Some(40.0),
            BandDensity::Bump => Some(1.0),
            BandDensity::PowerLaw { .. } => None,
        }
    }

    pub(crate) fn check(&self) -> crate::Result<()> {
        if let BandDensity::PowerLaw { alpha } = *self {
            if !(alpha > 0.0 && alpha < 2.0) {
                return Err(crate::ProfileError::Domain(format!(
                    "power-law exponent must lie in (0, 2), got {alpha}"
                )));
            }
        }
        Ok(())
    }
}
