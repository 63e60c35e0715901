//! Non-backtracking powers `V_n` of a Hermitian matrix, the correction
//! operators `Φ₂`, `Φ₃` and exact per-realization checks of the Chebyshev
//! path expansions for deformed Wigner and Wishart matrices.

#![forbid(unsafe_code)]

mod bipartite;
mod brute;
mod expansion;
mod family;
mod phi;

pub use bipartite::{alternation_defect, bipartite_block, bipartite_profile, side_constants};
pub use brute::{nb_powers_brute, seeded_powers_brute, BRUTE_BUDGET};
pub use expansion::{
    expansion_term_count, verify_wigner_path_expansion, verify_wishart_path_expansion, wigner_path_sum, wishart_path_sum, PathExpansionCheck, PathModel,
    EXPANSION_BUDGET, PATH_TOLERANCE,
};
pub use family::{nb_powers, seeded_powers, NbFamily};
pub use phi::{phi_ops, wishart_phi_ops};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, thiserror::Error)]
pub enum NbError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} needs about {estimate:.3e} operations, over the limit of {limit:.1e}")]
    Budget { what: String, estimate: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, NbError>;

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn check_hermitian(h: &CMatrix, what: &str) -> Result<()> {
    if h.nrows() == 0 || !h.is_square() {
        return Err(NbError::Domain(format!("{what} must be square and nonempty")));
    }
    if h.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(NbError::Domain(format!("{what} has non-finite entries")));
    }
    let scale = max_abs(h).max(1.0);
    let defect = max_abs(&(h - h.adjoint()));
    if defect > 1e-12 * scale {
        return Err(NbError::Domain(format!("{what} is not Hermitian (defect {defect:.3e})")));
    }
    Ok(())
}
