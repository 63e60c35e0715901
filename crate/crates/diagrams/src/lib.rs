//! Polygon gluings, their reduction to diagrams, diagram functions and an
//! independent Wick-pairing oracle for mixed trace moments of deformed
//! Gaussian matrices.

#![forbid(unsafe_code)]

mod contract;
mod corrections;
mod diagram;
mod eval;
mod gluing;
mod ribbon;
mod sum;
mod verify;
mod wick;

pub use contract::{okounkov_contract, Contraction};
pub use corrections::{b_prime, catalan_correction};
pub use diagram::{Diagram, DiagramVertices, EdgeKind, Step};
pub use eval::{envelope_bound, EvalContext, FaceTable, EVAL_BUDGET, FORMULA_BUDGET};
pub use gluing::{enumerate_gluings, gluing_count, perimeter_budget, Orientation, RibbonGluing};
pub use ribbon::{glue, RibbonEdge, RibbonGraph};
pub use verify::{
    chebyshev_moment, diagram_set, envelope_check, verify_chebyshev, verify_chebyshev_t, verify_cumulant, verify_expansions,
    verify_ribbon, DiagramContribution, EnvelopeReport, ExpansionCheck, Model, VerificationReport, TOLERANCE,
};
pub use wick::{wick_moment, WICK_BUDGET};

#[derive(Debug, thiserror::Error)]
pub enum DiagramError {
    #[error("malformed gluing: {0}")]
    Malformed(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what}: estimated cost {estimate:.3e} exceeds the budget {limit:.3e}")]
    Budget { what: String, estimate: f64, limit: f64 },
    #[error("dual paths disagree: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, DiagramError>;
