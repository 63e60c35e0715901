//! Samplers for inhomogeneous random matrix ensembles `X = Σ∘W + A` and
//! their Wishart analogues, plus exact mixed Gaussian moments.

#![forbid(unsafe_code)]

mod deformation;
mod law;
mod matrix;
mod moments;
mod rng;
mod samplers;
mod spec;

pub use deformation::{Basis, Deformation};
pub use law::{Beta, EntryLaw};
pub use matrix::Matrix;
pub use moments::{
    check_moment_inequality, gaussian_mixed_moment, gaussian_mixed_moment_table, odd_double_factorial,
    MomentInequalityReport,
};
pub use rng::{aux_stream, stream};
pub use samplers::{
    assemble, assemble_with_sigma, check_wishart_deformation, profile_sigma, sample_interpolating, sample_noise,
    sample_rect_noise, sample_theta_goe, sample_wigner, sample_wishart, truncate_heavy,
};
pub use spec::{Ensemble, EnsembleSpec, Model, Sample};

#[derive(Debug, thiserror::Error)]
pub enum EnsembleError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear algebra failure: {0}")]
    Linalg(String),
    #[error(transparent)]
    Profile(#[from] irm_profiles::ProfileError),
}

pub type Result<T> = std::result::Result<T, EnsembleError>;
