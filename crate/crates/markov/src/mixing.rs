use crate::fourier::CirculantSymbol;
use crate::powers::TransitionPowers;
use crate::{MarkovError, Result};
use irm_profiles::{ProfileKind, VarianceProfile};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Slack granted to the inequality checks for floating-point rounding.
const ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Exhaustive checks up to the horizon, nothing claimed beyond it.
    Exhaustive,
    /// Exhaustive up to the horizon plus a spectral tail bound for all later n.
    SpectralGap,
    /// Translation-invariant Fourier evaluation plus the symbol tail bound.
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixingStatus {
    Pass,
    Fail,
    /// All examined steps pass but the tail beyond the horizon is not certified.
    HorizonLimited,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    pub x: usize,
    pub y: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub t_n: usize,
    pub gamma: f64,
    pub delta: f64,
    pub horizon: usize,
    pub b1_pass: bool,
    pub b2_pass: bool,
    /// Largest short-time average, as `(x, y, value)` with `n = t_N`.
    pub worst_b1: Witness,
    /// Largest long-time deviation over the examined range.
    pub worst_b2: Witness,
    /// Smallest γ for which B1 holds at this `t_N`.
    pub gamma_observed: f64,
    /// Smallest δ for which B2 holds over the examined range.
    pub delta_observed: f64,
    pub certificate: Certificate,
    /// Whether the tail bound closes B2 beyond the horizon.
    pub tail_certified: bool,
    /// First step at which the examined deviation drops below `δ/N`, if any.
    pub t_mix: Option<usize>,
    /// Thouless-type diagnostic `t_mix < N^{1/3}`; informational only.
    pub thouless_ok: Option<bool>,
    pub status: MixingStatus,
}

fn check_args(t_n: usize, delta: f64, horizon: usize) -> Result<()> {
    if !(delta > 0.0 && delta < 0.1) {
        return Err(MarkovError::Domain(format!("δ must lie in (0, 0.1), got {delta}")));
    }
    if t_n == 0 || t_n > horizon {
        return Err(MarkovError::Domain(format!("need 1 <= t_N <= horizon (t_N={t_n}, horizon={horizon})")));
    }
    Ok(())
}

/// Largest modulus of an eigenvalue of a symmetric matrix after discarding
/// `skip` eigenvalues closest to the unit circle.
fn spectral_radius_after(m: DMatrix<f64>, skip: usize) -> f64 {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().map(|v| v.abs()).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev.get(skip).copied().unwrap_or(0.0)
}

fn finish(
    mut r: MixingReport,
    n_sites: f64,
    tail_bound: impl Fn(usize) -> Option<f64>,
) -> MixingReport {
    r.gamma_observed = r.worst_b1.value * n_sites;
    r.b1_pass = r.gamma_observed <= r.gamma * (1.0 + ROUNDING) + ROUNDING;
    r.delta_observed = r.worst_b2.value * n_sites;
    let examined_ok = r.delta_observed <= r.delta * (1.0 + ROUNDING) + ROUNDING;
    r.tail_certified = tail_bound(r.horizon + 1).is_some_and(|b| b * n_sites <= r.delta);
    r.b2_pass = examined_ok && r.tail_certified;
    r.thouless_ok = r.t_mix.map(|t| (t as f64) < n_sites.cbrt());
    r.status = if !r.b1_pass || !examined_ok {
        MixingStatus::Fail
    } else if r.tail_certified {
        MixingStatus::Pass
    } else {
        MixingStatus::HorizonLimited
    };
    r
}

fn empty_report(t_n: usize, gamma: f64, delta: f64, horizon: usize, certificate: Certificate) -> MixingReport {
    let w = Witness { n: 0, x: 0, y: 0, value: 0.0 };
    MixingReport {
        t_n,
        gamma,
        delta,
        horizon,
        b1_pass: false,
        b2_pass: false,
        worst_b1: Witness { n: t_n, ..w.clone() },
        worst_b2: Witness { n: t_n, ..w },
        gamma_observed: 0.0,
        delta_observed: 0.0,
        certificate,
        tail_certified: false,
        t_mix: None,
        thouless_ok: None,
        status: MixingStatus::Fail,
    }
}

/// Checks B1 (average of `p_1..p_{t_N}` at most `γ/N`) and B2
/// (`|p_n - 1/N| ≤ δ/N` for `n ≥ t_N`) for a square profile.
pub fn check_mixing(profile: &VarianceProfile, t_n: usize, gamma: f64, delta: f64, horizon: usize) -> Result<MixingReport> {
    check_args(t_n, delta, horizon)?;
    if profile.kind() != ProfileKind::Square {
        return Err(MarkovError::Domain("check_mixing needs a square profile; use bipartite_check_mixing".into()));
    }
    let n = profile.n();
    let nf = n as f64;
    let symmetric = profile.is_symmetric();
    let certificate = if symmetric { Certificate::SpectralGap } else { Certificate::Exhaustive };
    let mut r = empty_report(t_n, gamma, delta, horizon, certificate);
    let mut acc = DMatrix::<f64>::zeros(n, n);
    let mut powers = TransitionPowers::from_profile(profile);
    let target = 1.0 / nf;
    for step in 1..=horizon {
        let p = powers.advance()?;
        if step <= t_n {
            acc += p;
        }
        if step == t_n {
            for ((i, j), v) in acc.iter().enumerate().map(|(k, v)| ((k % n, k / n), v)) {
                let avg = v / t_n as f64;
                if avg > r.worst_b1.value {
                    r.worst_b1 = Witness { n: t_n, x: i, y: j, value: avg };
                }
            }
        }
        let mut step_worst = Witness { n: step, x: 0, y: 0, value: 0.0 };
        for (k, v) in p.iter().enumerate() {
            let dev = (v - target).abs();
            if dev > step_worst.value {
                step_worst = Witness { n: step, x: k % n, y: k / n, value: dev };
            }
        }
        if r.t_mix.is_none() && step_worst.value * nf <= delta {
            r.t_mix = Some(step);
        }
        if step >= t_n && step_worst.value > r.worst_b2.value {
            r.worst_b2 = step_worst;
        }
    }
    let lambda2 = if symmetric { Some(spectral_radius_after(profile.dense(), 1)) } else { None };
    Ok(finish(r, nf, |m| lambda2.map(|l| (nf - 1.0) * l.powi(m as i32))))
}

/// Fourier variant of [`check_mixing`] for circulant band profiles: by
/// translation invariance every row is a shift of `p_n(0, ·)`.
pub fn check_mixing_fourier(profile: &VarianceProfile, t_n: usize, gamma: f64, delta: f64, horizon: usize) -> Result<MixingReport> {
    check_args(t_n, delta, horizon)?;
    let sym = CirculantSymbol::new(profile)?;
    let n = profile.n();
    let nf = n as f64;
    let target = 1.0 / nf;
    let mut r = empty_report(t_n, gamma, delta, horizon, Certificate::Fourier);
    let mut acc = vec![0.0; n];
    for step in 1..=horizon {
        let row = sym.row(step);
        if step <= t_n {
            acc.iter_mut().zip(&row).for_each(|(a, v)| *a += v);
        }
        if step == t_n {
            for (y, v) in acc.iter().enumerate() {
                let avg = v / t_n as f64;
                if avg > r.worst_b1.value {
                    r.worst_b1 = Witness { n: t_n, x: 0, y, value: avg };
                }
            }
        }
        let mut step_worst = Witness { n: step, x: 0, y: 0, value: 0.0 };
        for (y, v) in row.iter().enumerate() {
            let dev = (v - target).abs();
            if dev > step_worst.value {
                step_worst = Witness { n: step, x: 0, y, value: dev };
            }
        }
        if r.t_mix.is_none() && step_worst.value * nf <= delta {
            r.t_mix = Some(step);
        }
        if step >= t_n && step_worst.value > r.worst_b2.value {
            r.worst_b2 = step_worst;
        }
    }
    Ok(finish(r, nf, |m| Some(sym.tail_bound(m))))
}

/// Checks D1/D2 on the bipartite chain over `[M] ⊔ [N]` (states `0..M` are
/// the `M` side). Targets are `1/N` for `y ∈ [N]` and `1/M` for `y ∈ [M]`;
/// D2 tests `p_n + p_{n+1}`.
pub fn bipartite_check_mixing(
    profile: &VarianceProfile,
    t_n: usize,
    gamma: f64,
    delta: f64,
    horizon: usize,
) -> Result<MixingReport> {
    check_args(t_n, delta, horizon)?;
    if profile.kind() != ProfileKind::Bipartite {
        return Err(MarkovError::Domain("bipartite_check_mixing needs a bipartite profile".into()));
    }
    let (m, n) = (profile.n_rows(), profile.n_cols());
    let s = m + n;
    // Side size of state y.
    let side = |y: usize| if y < m { m as f64 } else { n as f64 };
    let mut r = empty_report(t_n, gamma, delta, horizon, Certificate::SpectralGap);
    let mut powers = TransitionPowers::from_profile(profile);
    let mut acc = DMatrix::<f64>::zeros(s, s);
    let mut prev = powers.advance()?.clone();
    let (mut g_worst, mut d_worst) = (Witness { n: t_n, x: 0, y: 0, value: 0.0 }, Witness { n: 0, x: 0, y: 0, value: 0.0 });
    for step in 1..=horizon {
        let next = powers.advance()?.clone();
        if step <= t_n {
            acc += &prev;
        }
        if step == t_n {
            for (k, v) in acc.iter().enumerate() {
                let (x, y) = (k % s, k / s);
                // Normalized so that the bound reads value ≤ γ.
                let scaled = v / t_n as f64 * side(y);
                if scaled > g_worst.value {
                    g_worst = Witness { n: t_n, x, y, value: scaled };
                }
            }
        }
        let mut step_worst = Witness { n: step, x: 0, y: 0, value: 0.0 };
        for k in 0..s * s {
            let (x, y) = (k % s, k / s);
            let dev = ((prev[(x, y)] + next[(x, y)]) - 1.0 / side(y)).abs() * side(y);
            if dev > step_worst.value {
                step_worst = Witness { n: step, x, y, value: dev };
            }
        }
        if r.t_mix.is_none() && step_worst.value <= delta {
            r.t_mix = Some(step);
        }
        if step >= t_n && step_worst.value > d_worst.value {
            d_worst = step_worst;
        }
        prev = next;
    }
    // Reversible with stationary weights 1/(2M) on [M] and 1/(2N) on [N];
    // symmetrize to read off the spectrum.
    let p = profile.transition_matrix();
    let pi: Vec<f64> = (0..s).map(|y| 1.0 / (2.0 * side(y))).collect();
    let sym = DMatrix::from_fn(s, s, |i, j| p[(i, j)] * (pi[i] / pi[j]).sqrt());
    let lam = spectral_radius_after(sym, 2);
    let kappa = (n as f64 / m as f64).sqrt();
    // Values are already scaled by the side size, so compare against δ directly.
    r.worst_b1 = g_worst;
    r.worst_b2 = d_worst;
    let mut out = finish(r, 1.0, |k| Some(2.0 * kappa * lam.powi(k as i32) * n as f64));
    out.thouless_ok = out.t_mix.map(|t| (t as f64) < ((m + n) as f64).cbrt());
    Ok(out)
}
