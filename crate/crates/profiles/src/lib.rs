//! Variance profiles `σ²_ij` of inhomogeneous random matrices and the
//! builders for the standard families (band, generalized Wigner, sparse,
//! block, regular-graph and bipartite Wishart profiles).

#![forbid(unsafe_code)]

mod builders;
mod density;
mod error;
mod graph;
mod profile;
mod spec;

pub use builders::{
    band_profile, band_profile_custom, block_wegner_profile, generalized_wigner_profile, regular_graph_profile,
    sparse_profile, symmetric_sinkhorn, uniform_profile, wishart_profile, WishartBuilder, SINKHORN_MAX_ITER,
    SINKHORN_TOL,
};
pub use density::BandDensity;
pub use error::{ProfileError, Result};
pub use graph::{complete_graph, cycle_graph, random_regular_graph};
pub use spec::ProfileSpec;
pub use profile::{
    ProfileDocument, ProfileKind, ProfileMetadata, StorageTag, Torus, VarianceProfile, RENORMALIZE_TOL, VALIDATION_TOL,
};
