use crate::scalar::{cheb_eval, ChebKind};
use crate::{ChebError, Result};
use irm_ensembles::Matrix;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Largest Hermitian defect accepted by [`matrix_u_trace`].
pub const HERMITIAN_TOL: f64 = 1e-8;

/// `Tr U_n(X/2)` computed along two independent paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UTrace {
    pub n: Vec<usize>,
    /// `Σ_i U_n(λ_i/2)` over the eigenvalues of `X`.
    pub eigen: Vec<f64>,
    /// Trace of the matrix recurrence `U_n = X U_{n-1} - U_{n-2}`.
    pub recurrence: Vec<f64>,
}

impl UTrace {
    /// Largest `|eigen - recurrence| / max(|recurrence|, N)`; the traces are
    /// of order `N` when `‖X‖ ≤ 2`, so `N` guards against near-zero values.
    pub fn max_rel_diff(&self, dim: usize) -> f64 {
        self.eigen
            .iter()
            .zip(&self.recurrence)
            .map(|(a, b)| (a - b).abs() / b.abs().max(dim as f64))
            .fold(0.0, f64::max)
    }
}

fn recurrence_traces<T>(x: &DMatrix<T>, n_max: usize, re: impl Fn(T) -> f64) -> Vec<f64>
where
    T: nalgebra::ComplexField + Copy,
{
    let dim = x.nrows();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(dim as f64);
    if n_max == 0 {
        return out;
    }
    let mut prev = DMatrix::<T>::identity(dim, dim);
    let mut cur = x.clone();
    let mut next = DMatrix::<T>::zeros(dim, dim);
    out.push(re(cur.trace()));
    for _ in 2..=n_max {
        // next = X·cur - prev, keeping only two frontier matrices.
        next.copy_from(&prev);
        next.gemm(T::one(), x, &cur, -T::one());
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
        out.push(re(cur.trace()));
    }
    out
}

/// `Tr U_n(X/2)` for each `n` in `ns`, by eigenvalues and by the matrix recurrence.
pub fn matrix_u_trace(x: &Matrix, ns: &[usize]) -> Result<UTrace> {
    let defect = x.hermitian_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(ChebError::Domain(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    let ev = x.hermitian_eigenvalues().map_err(|e| ChebError::Domain(e.to_string()))?;
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let rec = match x {
        Matrix::Real(m) => recurrence_traces(m, n_max, |v: f64| v),
        Matrix::Complex(m) => recurrence_traces(m, n_max, |v: num_complex::Complex64| v.re),
    };
    let eigen = ns.iter().map(|&n| ev.iter().map(|l| cheb_eval(ChebKind::U, n, l / 2.0)).sum()).collect();
    let recurrence = ns.iter().map(|&n| rec[n]).collect();
    Ok(UTrace { n: ns.to_vec(), eigen, recurrence })
}

