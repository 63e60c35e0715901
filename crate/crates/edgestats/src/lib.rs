//! Spectral-edge statistics for random matrix ensembles: extreme
//! eigenvalues on the Tracy–Widom scale, two-sample comparisons against
//! same-size Gaussian baselines, tail estimates and the 2-lift spectrum
//! split.

#![forbid(unsafe_code)]

mod ks;
mod lift;
mod samples;
mod spectrum;
mod tail;
mod universality;

pub use ks::{kolmogorov_cdf_small, kolmogorov_survival, ks_statistic, ks_two_sample, KsResult};
pub use lift::{lift_adjacency, lift_spectrum_check, random_lift_check, random_signs, LiftReport, LIFT_TOLERANCE};
pub use samples::{edge_location, sample_edges, EdgeSamples, SPOT_CHECK_STRIDE};
pub use spectrum::{extreme_eigenvalues, extreme_pair, matrix_digest, spectrum, spectrum_with_residual, EdgeSide, HERMITIAN_TOL, RESIDUAL_TOL};
pub use tail::{tail_compare, tail_estimate, wilson_interval, TailComparison, TailTable};
pub use universality::{
    bbp_test, bbp_test_with, compare, derive_seed, gaussian_baseline, spec_digest, universality_test,
    universality_test_with, CoordinateTest, EdgeConfig, EdgeReport, Sampler, MIN_REPLICAS,
};

#[derive(Debug, thiserror::Error)]
pub enum EdgeError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{replicas} replicas requested; at least {min} are needed for a meaningful comparison")]
    Power { replicas: usize, min: usize },
    #[error("numerical failure on matrix {digest}: {detail}")]
    Numerical { digest: String, detail: String },
    #[error(transparent)]
    Ensemble(#[from] irm_ensembles::EnsembleError),
    #[error(transparent)]
    Profile(#[from] irm_profiles::ProfileError),
}

pub type Result<T> = std::result::Result<T, EdgeError>;
