use crate::deformation::Deformation;
use crate::law::{Beta, EntryLaw};
use crate::matrix::Matrix;
use crate::samplers::*;
use crate::{EnsembleError, Result};
use irm_profiles::{ProfileKind, ProfileSpec, VarianceProfile};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Wigner,
    Wishart,
}

/// Complete description of a random matrix ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub beta: Beta,
    pub entry_law: EntryLaw,
    pub profile: ProfileSpec,
    #[serde(default)]
    pub deformation: Option<Deformation>,
    pub model: Model,
    pub seed: u64,
}

/// One draw from an ensemble.
#[derive(Debug, Clone)]
pub struct Sample {
    pub matrix: Matrix,
    /// Fraction of noise entries removed by heavy-tail truncation.
    pub truncated_fraction: Option<f64>,
}

/// An [`EnsembleSpec`] with its profile and deformation materialized once.
#[derive(Debug, Clone)]
pub struct Ensemble {
    spec: EnsembleSpec,
    profile: VarianceProfile,
    sigma: DMatrix<f64>,
    deformation: Option<Matrix>,
}

impl Ensemble {
    pub fn new(spec: EnsembleSpec) -> Result<Self> {
        let profile = spec.profile.build()?;
        Self::with_profile(spec, profile)
    }

    /// Uses an already built profile in place of `spec.profile`.
    pub fn with_profile(spec: EnsembleSpec, profile: VarianceProfile) -> Result<Self> {
        spec.entry_law.validate(spec.beta)?;
        let expected = match spec.model {
            Model::Wigner => ProfileKind::Square,
            Model::Wishart => ProfileKind::Bipartite,
        };
        if profile.kind() != expected {
            return Err(EnsembleError::Domain(format!("{:?} model needs a {:?} profile", spec.model, expected)));
        }
        let deformation = match (&spec.deformation, spec.model) {
            (None, _) => None,
            (Some(d), Model::Wigner) => Some(d.materialize(profile.n(), spec.beta)?),
            (Some(d), Model::Wishart) => {
                let a = d.materialize_rect(profile.n_rows(), profile.n_cols(), spec.beta)?;
                let tau = d.spikes.iter().copied().fold(0.0, f64::max);
                check_wishart_deformation(&a, profile.alpha(), profile.n_cols(), tau)?;
                Some(a)
            }
        };
        let sigma = profile_sigma(&profile);
        Ok(Ensemble { spec, profile, sigma, deformation })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn profile(&self) -> &VarianceProfile {
        &self.profile
    }

    /// Dimension of the sampled matrix.
    pub fn dim(&self) -> usize {
        self.profile.n_rows()
    }

    /// Draws replica `replica`; a pure function of `(spec, replica)`.
    pub fn sample(&self, replica: u64) -> Result<Sample> {
        let s = &self.spec;
        let (m, n) = (self.profile.n_rows(), self.profile.n_cols());
        let noise = match s.model {
            Model::Wigner => sample_noise(n, s.entry_law, s.beta, s.seed, replica)?,
            Model::Wishart => sample_rect_noise(m, n, s.entry_law, s.beta, s.seed, replica)?,
        };
        let (noise, truncated_fraction) = match s.entry_law.truncation() {
            Some(zeta) => {
                let (w, f) = truncate_heavy(&noise, n, zeta)?;
                (w, Some(f))
            }
            None => (noise, None),
        };
        let x = assemble_with_sigma(&self.sigma, &noise, self.deformation.as_ref())?;
        let matrix = match s.model {
            Model::Wigner => x,
            Model::Wishart => x.gram(),
        };
        Ok(Sample { matrix, truncated_fraction })
    }
}
