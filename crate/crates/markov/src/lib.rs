//! Markov chains induced by variance profiles: transition powers, the
//! short-to-long mixing checks (square and bipartite), and the Fourier
//! representation of circulant band chains.

#![forbid(unsafe_code)]

mod envelope;
mod fourier;
mod mixing;
mod powers;

pub use envelope::{band_decay_slope, band_mixing_envelope, max_deviation, BandEnvelope};
pub use fourier::{band_transition_fourier, CirculantSymbol};
pub use mixing::{
    bipartite_check_mixing, check_mixing, check_mixing_fourier, Certificate, MixingReport, MixingStatus, Witness,
};
pub use powers::{transition_powers, TransitionPowers, COMPENSATED_FROM, DRIFT_LIMIT};

#[derive(Debug, thiserror::Error)]
pub enum MarkovError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("row sums drifted by {drift:e} at step {n}")]
    Drift { n: usize, drift: f64 },
    #[error("unsupported structure: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Profile(#[from] irm_profiles::ProfileError),
}

pub type Result<T> = std::result::Result<T, MarkovError>;
