use crate::builders::*;
use crate::density::BandDensity;
use crate::error::{ProfileError, Result};
use crate::graph::random_regular_graph;
use crate::profile::{ProfileDocument, VarianceProfile};
use serde::{Deserialize, Serialize};

fn default_density() -> BandDensity {
    BandDensity::Gaussian
}

/// Declarative description of a profile, as it appears in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Uniform {
        n: usize,
    },
    Band {
        #[serde(default = "one")]
        d: usize,
        l: usize,
        w: f64,
        #[serde(default = "default_density")]
        density: BandDensity,
    },
    GeneralizedWigner {
        n: usize,
        c: f64,
        cap: f64,
        #[serde(default)]
        seed: u64,
    },
    /// Homogeneous sparse profile `p = 1/θ`, `w = θ`, `d = N`.
    SparseHomogeneous {
        n: usize,
        theta: f64,
    },
    BlockWegner {
        blocks: usize,
        m: usize,
        lambda: f64,
    },
    RandomRegular {
        n: usize,
        degree: usize,
        #[serde(default)]
        seed: u64,
    },
    Wishart {
        m: usize,
        n: usize,
        /// Relative band width; omitted means the flat profile `1/N`.
        #[serde(default)]
        width: Option<f64>,
    },
    /// Profile given inline as a serialized document.
    Document {
        document: ProfileDocument,
    },
}

fn one() -> usize {
    1
}

impl ProfileSpec {
    pub fn build(&self) -> Result<VarianceProfile> {
        match self {
            ProfileSpec::Uniform { n } => uniform_profile(*n),
            ProfileSpec::Band { d, l, w, density } => band_profile(*d, *l, *w, *density),
            ProfileSpec::GeneralizedWigner { n, c, cap, seed } => generalized_wigner_profile(*n, *c, *cap, *seed),
            ProfileSpec::SparseHomogeneous { n, theta } => {
                if !(*theta >= 1.0) {
                    return Err(ProfileError::Domain(format!("θ must be >= 1, got {theta}")));
                }
                let p = nalgebra::DMatrix::from_element(*n, *n, 1.0 / theta);
                let w = nalgebra::DMatrix::from_element(*n, *n, *theta);
                sparse_profile(&p, &w, *n as f64)
            }
            ProfileSpec::BlockWegner { blocks, m, lambda } => block_wegner_profile(*blocks, *m, *lambda),
            ProfileSpec::RandomRegular { n, degree, seed } => {
                regular_graph_profile(&random_regular_graph(*n, *degree, *seed)?, *degree)
            }
            ProfileSpec::Wishart { m, n, width } => {
                let b = match width {
                    None => WishartBuilder::Uniform,
                    Some(width) => WishartBuilder::Banded { width: *width },
                };
                wishart_profile(*m, *n, b)
            }
            ProfileSpec::Document { document } => VarianceProfile::from_document(document.clone()),
        }
    }
}
