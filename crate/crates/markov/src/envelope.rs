use crate::fourier::CirculantSymbol;
use crate::Result;
use irm_profiles::VarianceProfile;
use serde::{Deserialize, Serialize};

/// Decay envelope `C W^{-d} n^{-d/α} + C' n W^{-K}` for band transition
/// probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandEnvelope {
    pub d: usize,
    pub alpha: f64,
    pub w: f64,
    pub k: f64,
    pub c: f64,
    pub c_prime: f64,
}

pub fn band_mixing_envelope(d: usize, alpha: f64, w: f64, k: f64, c: f64, c_prime: f64, n: usize) -> f64 {
    let (df, nf) = (d as f64, n as f64);
    c * w.powf(-df) * nf.powf(-df / alpha) + c_prime * nf * w.powf(-k)
}

impl BandEnvelope {
    pub fn eval(&self, n: usize) -> f64 {
        band_mixing_envelope(self.d, self.alpha, self.w, self.k, self.c, self.c_prime, n)
    }

    /// Fixes `C` as the smallest constant dominating the observed deviation
    /// on `1..=n_cal`; `C'` is left at the supplied value.
    pub fn calibrate(profile: &VarianceProfile, n_cal: usize, k: f64, c_prime: f64) -> Result<Self> {
        let sym = CirculantSymbol::new(profile)?;
        let t = sym.torus();
        let alpha = t.density.map(|f| f.stable_exponent()).unwrap_or(2.0);
        let mut env = BandEnvelope { d: t.dimension, alpha, w: t.bandwidth, k, c: 0.0, c_prime };
        let unit = BandEnvelope { c: 1.0, c_prime: 0.0, ..env };
        for n in 1..=n_cal.max(1) {
            let dev = max_deviation(&sym, n);
            env.c = env.c.max(dev / unit.eval(n));
        }
        Ok(env)
    }
}

/// `max_x |p_n(0, x) - 1/N|`.
pub fn max_deviation(sym: &CirculantSymbol, n: usize) -> f64 {
    let row = sym.row(n);
    let target = 1.0 / row.len() as f64;
    row.iter().map(|v| (v - target).abs()).fold(0.0, f64::max)
}

/// Least-squares slope of `log max_x |p_n(0,x) - 1/N|` against `log n` over
/// the integer range `lo..=hi`.
pub fn band_decay_slope(profile: &VarianceProfile, lo: usize, hi: usize) -> Result<f64> {
    let sym = CirculantSymbol::new(profile)?;
    let pts: Vec<(f64, f64)> = (lo.max(1)..=hi).map(|n| ((n as f64).ln(), max_deviation(&sym, n).ln())).collect();
    Ok(ols_slope(&pts))
}

pub(crate) fn ols_slope(pts: &[(f64, f64)]) -> f64 {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
