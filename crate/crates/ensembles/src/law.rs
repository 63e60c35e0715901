use crate::{EnsembleError, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

/// Symmetry class: real symmetric (1) or complex Hermitian (2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Beta {
    Real,
    Complex,
}

impl TryFrom<u8> for Beta {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Beta::Real),
            2 => Ok(Beta::Complex),
            _ => Err(format!("beta must be 1 or 2, got {v}")),
        }
    }
}

impl From<Beta> for u8 {
    fn from(b: Beta) -> u8 {
        match b {
            Beta::Real => 1,
            Beta::Complex => 2,
        }
    }
}

/// Distribution of the normalized noise entries `W_ij`.
///
/// Every law has `E|W_ij|² = 1` off the diagonal; the diagonal has variance
/// 2 in the real case and 1 (real-valued) in the complex case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum EntryLaw {
    Gaussian,
    /// `√θ·Bern(1/θ)` mask times a Gaussian entry.
    ThetaGoe { theta: f64 },
    Rademacher,
    /// GOE–GUE interpolation; `alpha_mix = null` stands for `α = ∞`.
    Interpolating { alpha_mix: Option<f64> },
    /// Unit-variance Student-t with `dof` degrees of freedom, optionally
    /// truncated at `N^{ζ/2}`.
    HeavyTailed { dof: f64, zeta: Option<f64> },
}

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

impl EntryLaw {
    pub fn validate(&self, beta: Beta) -> Result<()> {
        match *self {
            EntryLaw::ThetaGoe { theta } if !(theta >= 1.0 && theta.is_finite()) => {
                Err(EnsembleError::Domain(format!("θ must be >= 1, got {theta}")))
            }
            EntryLaw::Interpolating { alpha_mix } => {
                if beta != Beta::Complex {
                    return Err(EnsembleError::Domain("the interpolating law is complex; use beta = 2".into()));
                }
                match alpha_mix {
                    Some(a) if !(a >= 0.0) => Err(EnsembleError::Domain(format!("α_mix must be >= 0, got {a}"))),
                    _ => Ok(()),
                }
            }
            EntryLaw::HeavyTailed { dof, zeta } => {
                if !(dof > 2.0) {
                    return Err(EnsembleError::Domain(format!("Student-t needs dof > 2 for unit variance, got {dof}")));
                }
                match zeta {
                    Some(z) if !(z > 0.0 && z < 1.0 / 3.0) => {
                        Err(EnsembleError::Domain(format!("ζ must lie in (0, 1/3), got {z}")))
                    }
                    _ => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    /// One real-symmetric entry; `diagonal` selects the variance-2 law.
    pub fn draw_real<R: Rng>(&self, diagonal: bool, rng: &mut R) -> f64 {
        let scale = if diagonal { std::f64::consts::SQRT_2 } else { 1.0 };
        match *self {
            EntryLaw::Gaussian => scale * gauss(rng),
            EntryLaw::ThetaGoe { theta } => {
                if theta == 1.0 || rng.random::<f64>() * theta < 1.0 {
                    theta.sqrt() * scale * gauss(rng)
                } else {
                    0.0
                }
            }
            EntryLaw::Rademacher => {
                if rng.random::<bool>() {
                    scale
                } else {
                    -scale
                }
            }
            EntryLaw::Interpolating { .. } => unreachable!("validated: interpolating law is complex"),
            EntryLaw::HeavyTailed { dof, .. } => scale * student(dof, rng),
        }
    }

    /// One Hermitian entry; the diagonal is real with unit variance.
    pub fn draw_complex<R: Rng>(&self, diagonal: bool, rng: &mut R) -> Complex64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            EntryLaw::Interpolating { alpha_mix } => {
                let (re, im) = match alpha_mix {
                    None => (0.0, 1.0),
                    Some(a) => ((1.0 / (1.0 + a * a)).sqrt(), (a * a / (1.0 + a * a)).sqrt()),
                };
                if diagonal {
                    Complex64::new(std::f64::consts::SQRT_2 * re * gauss(rng), 0.0)
                } else {
                    let x = re * gauss(rng);
                    let y = im * gauss(rng);
                    Complex64::new(x, y)
                }
            }
            EntryLaw::ThetaGoe { theta } => {
                if theta == 1.0 || rng.random::<f64>() * theta < 1.0 {
                    EntryLaw::Gaussian.draw_complex(diagonal, rng) * theta.sqrt()
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            _ if diagonal => Complex64::new(self.draw_unit(rng), 0.0),
            _ => Complex64::new(self.draw_unit(rng) * h, self.draw_unit(rng) * h),
        }
    }

    /// One unit-variance real entry with no diagonal adjustment (Wishart noise).
    pub fn draw_unit<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            EntryLaw::Gaussian => gauss(rng),
            EntryLaw::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            EntryLaw::HeavyTailed { dof, .. } => student(dof, rng),
            EntryLaw::ThetaGoe { .. } => self.draw_real(false, rng),
            EntryLaw::Interpolating { .. } => unreachable!("validated: interpolating law is complex"),
        }
    }

    /// One unit-variance complex entry with `E W² = 0` (Wishart noise).
    pub fn draw_unit_complex<R: Rng>(&self, rng: &mut R) -> Complex64 {
        match self {
            EntryLaw::Interpolating { .. } | EntryLaw::ThetaGoe { .. } => self.draw_complex(false, rng),
            _ => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                Complex64::new(self.draw_unit(rng) * h, self.draw_unit(rng) * h)
            }
        }
    }

    pub fn truncation(&self) -> Option<f64> {
        match self {
            EntryLaw::HeavyTailed { zeta, .. } => *zeta,
            _ => None,
        }
    }
}

fn student<R: Rng>(dof: f64, rng: &mut R) -> f64 {
    let t: f64 = StudentT::new(dof).expect("validated dof").sample(rng);
    t * ((dof - 2.0) / dof).sqrt()
}
