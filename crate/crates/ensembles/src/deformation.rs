use crate::law::Beta;
use crate::matrix::Matrix;
use crate::rng::aux_stream;
use crate::{EnsembleError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Basis {
    /// Leading coordinate vectors `e_1, ..., e_r`.
    Coordinate,
    /// Haar-distributed orthonormal (or unitary) frame drawn from `seed`.
    Random { seed: u64 },
}

/// Finite-rank deformation `A = Q Λ Q*`.
///
/// The first `spikes.len()` eigenvalues are critical, `a_j = c + τ_j N^{-1/3}`
/// with `c = 1` for Wigner matrices and `c = √α` for Wishart matrices; the
/// remaining ones are the `bulk` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Deformation {
    #[serde(default)]
    pub spikes: Vec<f64>,
    #[serde(default)]
    pub bulk: Vec<f64>,
    pub basis: Basis,
}

impl Deformation {
    pub fn spike(tau: f64) -> Self {
        Deformation { spikes: vec![tau], bulk: vec![], basis: Basis::Coordinate }
    }

    pub fn rank(&self) -> usize {
        self.spikes.len() + self.bulk.len()
    }

    /// Eigenvalues `a_1..a_r` around the critical value `edge` at size `n`.
    pub fn eigenvalues(&self, edge: f64, n: usize) -> Result<Vec<f64>> {
        let scale = (n as f64).powf(-1.0 / 3.0);
        if let Some(b) = self.bulk.iter().find(|b| !(b.abs() < edge)) {
            return Err(EnsembleError::Domain(format!("bulk eigenvalue {b} outside (-{edge}, {edge})")));
        }
        Ok(self.spikes.iter().map(|t| edge + t * scale).chain(self.bulk.iter().copied()).collect())
    }

    /// `n × r` frame with orthonormal columns.
    fn frame(&self, n: usize, beta: Beta) -> Result<Matrix> {
        let r = self.rank();
        if r > n {
            return Err(EnsembleError::Domain(format!("rank {r} exceeds dimension {n}")));
        }
        Ok(match (self.basis, beta) {
            (Basis::Coordinate, _) => Matrix::Real(DMatrix::from_fn(n, r, |i, j| if i == j { 1.0 } else { 0.0 })),
            (Basis::Random { seed }, Beta::Real) => Matrix::Real(haar_real(n, r, seed)),
            (Basis::Random { seed }, Beta::Complex) => Matrix::Complex(haar_complex(n, r, seed)),
        })
    }

    /// Hermitian `n × n` deformation of a Wigner-type matrix, symmetrized so
    /// that it is exactly self-adjoint.
    pub fn materialize(&self, n: usize, beta: Beta) -> Result<Matrix> {
        let a = self.eigenvalues(1.0, n)?;
        let q = self.frame(n, beta)?;
        Ok(match q {
            Matrix::Real(q) => {
                let l = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(a));
                let a = &q * l * q.transpose();
                Matrix::Real((&a + a.transpose()) * 0.5)
            }
            Matrix::Complex(q) => {
                let l = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    a.len(),
                    a.iter().map(|v| Complex64::new(*v, 0.0)),
                ));
                let a = &q * l * q.adjoint();
                Matrix::Complex((&a + a.adjoint()).map(|v| v * 0.5))
            }
        })
    }

    /// Rectangular `m × n` deformation `U diag(a) V*` of a Wishart matrix.
    pub fn materialize_rect(&self, m: usize, n: usize, beta: Beta) -> Result<Matrix> {
        let alpha = m as f64 / n as f64;
        let a = self.eigenvalues(alpha.sqrt(), n)?;
        let u = self.frame(m, beta)?;
        // The right frame uses a distinct stream so U and V are independent.
        let right = match self.basis {
            Basis::Random { seed } => Deformation { basis: Basis::Random { seed: seed ^ 0x9e37_79b9_7f4a_7c15 }, ..self.clone() },
            Basis::Coordinate => self.clone(),
        };
        let v = right.frame(n, beta)?;
        let r = a.len();
        Ok(match (u, v) {
            (Matrix::Real(u), Matrix::Real(v)) => {
                let l = DMatrix::from_fn(r, r, |i, j| if i == j { a[i] } else { 0.0 });
                Matrix::Real(&u * l * v.transpose())
            }
            (u, v) => {
                let l = DMatrix::from_fn(r, r, |i, j| Complex64::new(if i == j { a[i] } else { 0.0 }, 0.0));
                Matrix::Complex(u.to_complex() * l * v.to_complex().adjoint())
            }
        })
    }
}

fn sign_fix<T: nalgebra::ComplexField<RealField = f64> + Copy>(q: &mut DMatrix<T>, r: &DMatrix<T>) {
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        let m = d.clone().modulus();
        if m > 0.0 {
            let phase = d.unscale(m);
            for i in 0..q.nrows() {
                q[(i, j)] = q[(i, j)] * phase;
            }
        }
    }
}

fn haar_real(n: usize, r: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = aux_stream(seed, 0);
    let g = DMatrix::from_fn(n, r, |_, _| StandardNormal.sample(&mut rng));
    let qr = g.qr();
    let (mut q, rr) = (qr.q(), qr.r());
    sign_fix(&mut q, &rr);
    q
}

fn haar_complex(n: usize, r: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = aux_stream(seed, 0);
    let mut draw = || {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b): (f64, f64) = (StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
        Complex64::new(a * h, b * h)
    };
    let g = DMatrix::from_fn(n, r, |_, _| draw());
    let qr = g.qr();
    let (mut q, rr) = (qr.q(), qr.r());
    sign_fix(&mut q, &rr);
    q
}
