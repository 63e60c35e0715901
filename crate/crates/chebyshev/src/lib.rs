//! Chebyshev polynomials (scalar, matrix and exact), product coefficients,
//! hard-edge scaling, and the Marchenko–Pastur polynomial families.

#![forbid(unsafe_code)]

mod matrix;
mod poly;
mod report;
mod scalar;
mod series;
mod wishart;

pub use matrix::{matrix_u_trace, UTrace, HERMITIAN_TOL};
pub use poly::{binom, rat, RatPoly};
pub use report::IdentityReport;
pub use scalar::{
    cheb_eval, cheb_poly, fit_u_lower_constant, hard_edge_finite, hard_edge_limit, orthogonality_check,
    orthogonality_sum, power_to_t, product_coeffs, product_identity_holds, t_to_power, u_upper_bound,
    u_upper_bound_sharp, ChebKind,
};
pub use series::{p_poly, power_to_t_series, q_poly, PolySeries, SeriesBasis};
pub use wishart::{
    cmp_coeff, cmp_table, compose, mp_moments, p_polys, q_chebyshev_form, q_eval, q_polys, q_u_max_error,
    un_pn_identity, UnPnReport,
};

#[derive(Debug, thiserror::Error)]
pub enum ChebError {
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, ChebError>;
