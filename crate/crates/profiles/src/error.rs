use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("row {row} sums to {sum}, expected {target}")]
    RowSum { row: usize, sum: f64, target: f64 },
    #[error("column {col} sums to {sum}, expected {target}")]
    ColSum { col: usize, sum: f64, target: f64 },
    #[error("balancing did not converge after {iterations} iterations (defect {defect:e})")]
    Convergence { iterations: usize, defect: f64 },
    #[error("unsupported structure: {0}")]
    Unsupported(String),
    #[error("malformed profile document: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ProfileError>;
