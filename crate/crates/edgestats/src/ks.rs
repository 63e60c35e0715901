use crate::{EdgeError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
    /// `n₁n₂/(n₁+n₂)`.
    pub effective_n: f64,
    /// Whether tied values had to be separated by jitter.
    pub jittered: bool,
}

/// `P(K ≤ λ)` from the theta-function form, accurate for small `λ`.
pub fn kolmogorov_cdf_small(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let c = -PI * PI / (8.0 * lambda * lambda);
    let s: f64 = (1..=20).map(|k| ((2 * k - 1) as f64).powi(2) * c).map(f64::exp).sum();
    (2.0 * PI).sqrt() / lambda * s
}

/// `P(K > λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}` for the Kolmogorov law.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        return (1.0 - kolmogorov_cdf_small(lambda)).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let t = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        s += if k % 2 == 1 { t } else { -t };
        if t < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// `sup_x |F_a(x) − F_b(x)|` for two samples.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a: Vec<f64> = a.to_vec();
    let mut b: Vec<f64> = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0_f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

fn has_ties(a: &[f64], b: &[f64]) -> bool {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    all.windows(2).any(|w| w[0] == w[1])
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value
/// `Q((√nₑ + 0.12 + 0.11/√nₑ)·D)`.
///
/// Tied values are separated by seeded jitter far below the smallest gap
/// between distinct values, so the result stays a function of the inputs
/// and `jitter_seed`.
pub fn ks_two_sample(a: &[f64], b: &[f64], jitter_seed: u64) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(EdgeError::Domain("KS test needs two nonempty samples".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(EdgeError::Domain("KS samples must be finite".into()));
    }
    let jittered = has_ties(a, b);
    let statistic = if jittered {
        let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
        all.sort_by(f64::total_cmp);
        all.dedup();
        let gap = all.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let scale = all.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let eps = if gap.is_finite() { 1e-6 * gap } else { 1e-9 * scale };
        let mut rng = ChaCha8Rng::seed_from_u64(jitter_seed);
        let mut jitter = |v: &f64| v + eps * (rng.random::<f64>() - 0.5);
        let ja: Vec<f64> = a.iter().map(&mut jitter).collect();
        let jb: Vec<f64> = b.iter().map(&mut jitter).collect();
        ks_statistic(&ja, &jb)
    } else {
        ks_statistic(a, b)
    };
    let (n1, n2) = (a.len(), b.len());
    let ne = (n1 * n2) as f64 / (n1 + n2) as f64;
    let s = ne.sqrt();
    let p_value = kolmogorov_survival((s + 0.12 + 0.11 / s) * statistic);
    Ok(KsResult { statistic, p_value, n1, n2, effective_n: ne, jittered })
}
