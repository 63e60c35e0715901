use crate::{EnsembleError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense real or complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl Matrix {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Matrix::Real(m) => m.shape(),
            Matrix::Complex(m) => m.shape(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Matrix::Complex(_))
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        match self {
            Matrix::Real(m) => m.map(|v| Complex64::new(v, 0.0)),
            Matrix::Complex(m) => m.clone(),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match self {
            Matrix::Real(m) => Complex64::new(m[(i, j)], 0.0),
            Matrix::Complex(m) => m[(i, j)],
        }
    }

    /// Largest `|X_ij - conj(X_ji)|`; infinite for non-square matrices.
    pub fn hermitian_defect(&self) -> f64 {
        let (r, c) = self.shape();
        if r != c {
            return f64::INFINITY;
        }
        let mut d: f64 = 0.0;
        for i in 0..r {
            for j in 0..=i {
                d = d.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        d
    }

    /// Entrywise sum, promoting to complex when either side is complex.
    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(EnsembleError::Dimension(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        Ok(match (self, other) {
            (Matrix::Real(a), Matrix::Real(b)) => Matrix::Real(a + b),
            _ => Matrix::Complex(self.to_complex() + other.to_complex()),
        })
    }

    pub fn scale(&self, s: f64) -> Matrix {
        match self {
            Matrix::Real(m) => Matrix::Real(m * s),
            Matrix::Complex(m) => Matrix::Complex(m.map(|v| v * s)),
        }
    }

    /// Entrywise product with a real matrix.
    pub fn hadamard(&self, s: &DMatrix<f64>) -> Result<Matrix> {
        if self.shape() != s.shape() {
            return Err(EnsembleError::Dimension(format!("{:?} vs {:?}", self.shape(), s.shape())));
        }
        Ok(match self {
            Matrix::Real(m) => Matrix::Real(m.component_mul(s)),
            Matrix::Complex(m) => Matrix::Complex(m.zip_map(s, |a, b| a * b)),
        })
    }

    /// `X X*`.
    pub fn gram(&self) -> Matrix {
        match self {
            Matrix::Real(m) => Matrix::Real(m * m.transpose()),
            Matrix::Complex(m) => Matrix::Complex(m * m.adjoint()),
        }
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let (r, c) = self.shape();
        if r != c {
            return Err(EnsembleError::Dimension(format!("eigenvalues of a {r}x{c} matrix")));
        }
        let mut ev: Vec<f64> = match self {
            Matrix::Real(m) => m.clone().symmetric_eigenvalues().iter().copied().collect(),
            Matrix::Complex(m) => m.clone().symmetric_eigenvalues().iter().copied().collect(),
        };
        if ev.iter().any(|v| !v.is_finite()) {
            return Err(EnsembleError::Linalg("eigensolver produced a non-finite value".into()));
        }
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        match self {
            Matrix::Real(m) => m.clone().singular_values().max(),
            Matrix::Complex(m) => m.clone().singular_values().max(),
        }
    }
}
