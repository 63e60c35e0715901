use super::{positive, Body};
use crate::config::ExperimentConfig;
use crate::report::{Budget, Check};
use crate::{CliError, Result};
use irm_edgestats::derive_seed;
use irm_markov::{band_decay_slope, check_mixing, CirculantSymbol, MixingStatus, TransitionPowers};
use irm_profiles::{band_profile, block_wegner_profile, generalized_wigner_profile, uniform_profile, BandDensity};
use serde::Serialize;
use serde_json::{json, Value};

const SLOPE_RING: usize = 8192;
const SLOPE_WINDOW: (usize, usize) = (4, 256);
const SLOPE_RANGE: (f64, f64) = (-0.65, -0.35);
const FOURIER_STEPS: usize = 200;
const FOURIER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct MixingPlan {
    pub gw_n: usize,
    pub c: f64,
    pub cap: f64,
    pub gamma: f64,
    pub delta: f64,
    pub t_n: usize,
    pub horizon: usize,
    pub gw_seed: u64,
    pub fourier_l: usize,
    pub fourier_w: f64,
}

impl MixingPlan {
    pub fn resolve(config: &ExperimentConfig) -> Result<Self> {
        let p = &config.params;
        let n = positive("n", p.n.unwrap_or(256))?;
        let (c, cap) = (p.c.unwrap_or(0.5), p.cap.unwrap_or(2.0));
        if !(c > 0.0 && c < 1.0 && cap > 1.0) {
            return Err(CliError::Config(format!("need 0 < c < 1 < C, got c = {c}, C = {cap}")));
        }
        let t_n = p.t_n.unwrap_or_else(|| (100.0 * (cap / c) * (n as f64).ln()).ceil() as usize);
        let horizon = p.horizon.unwrap_or(t_n);
        let delta = p.delta.unwrap_or(0.05);
        if t_n == 0 || horizon < t_n || !(delta > 0.0 && delta < 0.1) {
            return Err(CliError::Config(format!("need 1 ≤ t_N ≤ horizon and δ ∈ (0, 0.1); got t_N = {t_n}, horizon = {horizon}, δ = {delta}")));
        }
        Ok(MixingPlan {
            gw_n: n,
            c,
            cap,
            gamma: p.gamma.unwrap_or(3.0),
            delta,
            t_n,
            horizon,
            gw_seed: derive_seed(config.seed, 7),
            fourier_l: positive("l", p.l.unwrap_or(64))?,
            fourier_w: p.w.unwrap_or(8.0),
        })
    }

    pub fn budget(&self) -> Budget {
        let estimate = self.horizon as f64 * (self.gw_n as f64).powi(3)
            + FOURIER_STEPS as f64 * (self.fourier_l as f64).powi(3)
            + (SLOPE_WINDOW.1 * SLOPE_RING) as f64 * (SLOPE_RING as f64).log2();
        Budget { unit: "flops (order of magnitude)".into(), estimate, limit: 1e12 }
    }

    pub fn criteria(&self) -> Value {
        json!({
            "uniform": "t_N = 1, γ = 1 certifies with δ_observed = 0",
            "block_diagonal": "B2 fails at every examined t",
            "generalized_wigner": "B1 holds with γ_observed ≤ γ at t_N = ⌈100 (C/c) log N⌉",
            "fourier_tolerance": FOURIER_TOL,
            "slope_range": [SLOPE_RANGE.0, SLOPE_RANGE.1],
        })
    }

    pub(crate) fn run(&self) -> Result<Body> {
        let mut checks = vec![];

        let u = check_mixing(&uniform_profile(8)?, 1, 1.0, 0.01, 5)?;
        let ok = u.status == MixingStatus::Pass && (u.gamma_observed - 1.0).abs() < 1e-12 && u.delta_observed < 1e-12;
        checks.push(Check::new("uniform profile certifies at t = 1, γ = 1", ok, u.delta_observed, 1e-12).with(&u));

        let blocks = block_wegner_profile(2, 5, 0.0)?;
        for t in [1, 3, 10, 40] {
            let r = check_mixing(&blocks, t, 2.0, 0.05, 40)?;
            checks.push(Check::new(format!("block-diagonal profile fails B2 at t = {t}"), !r.b2_pass, r.delta_observed, r.delta).with(&r));
        }

        let gw = generalized_wigner_profile(self.gw_n, self.c, self.cap, self.gw_seed)?;
        let r = check_mixing(&gw, self.t_n, self.gamma, self.delta, self.horizon)?;
        checks.push(
            Check::new(
                format!("generalized Wigner N = {} passes B1 at t_N = {}", self.gw_n, self.t_n),
                r.b1_pass && r.gamma_observed <= self.gamma,
                r.gamma_observed,
                self.gamma,
            )
            .with(&r),
        );

        let band = band_profile(1, self.fourier_l, self.fourier_w, BandDensity::Gaussian)?;
        let sym = CirculantSymbol::new(&band)?;
        let mut powers = TransitionPowers::from_profile(&band);
        let mut worst: f64 = 0.0;
        for n in 1..=FOURIER_STEPS {
            let dense = powers.advance()?;
            for (x, v) in sym.row(n).iter().enumerate() {
                worst = worst.max((v - dense[(0, x)]).abs());
            }
        }
        checks.push(Check::new(
            format!("Fourier and dense transition probabilities agree (L = {}, n ≤ {FOURIER_STEPS})", self.fourier_l),
            worst <= FOURIER_TOL,
            worst,
            FOURIER_TOL,
        ));

        let ring = band_profile(1, SLOPE_RING, 8.0, BandDensity::Gaussian)?;
        let slope = band_decay_slope(&ring, SLOPE_WINDOW.0, SLOPE_WINDOW.1)?;
        checks.push(
            Check::new(
                "band decay log-log slope near -d/2",
                (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope),
                slope,
                -0.5,
            )
            .with(json!({ "range": [SLOPE_RANGE.0, SLOPE_RANGE.1], "ring": SLOPE_RING, "window": [SLOPE_WINDOW.0, SLOPE_WINDOW.1] })),
        );
        Ok(Body::new(checks))
    }
}
