use crate::{EdgeError, Result};
use irm_ensembles::Matrix;
use nalgebra::{ComplexField, DMatrix, SymmetricTridiagonal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const HERMITIAN_TOL: f64 = 1e-8;
/// Allowed `‖Xv − λv‖ / ‖X‖` for the extreme eigenpairs.
pub const RESIDUAL_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 10_000;

/// Which end of the spectrum a statistic looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeSide {
    Upper,
    Lower,
}

/// Short SHA-256 digest of a matrix's shape and entry bits.
pub fn matrix_digest(x: &Matrix) -> String {
    let mut h = Sha256::new();
    let (r, c) = x.shape();
    h.update((r as u64).to_le_bytes());
    h.update((c as u64).to_le_bytes());
    match x {
        Matrix::Real(m) => m.iter().for_each(|v| h.update(v.to_bits().to_le_bytes())),
        Matrix::Complex(m) => m.iter().for_each(|z| {
            h.update(z.re.to_bits().to_le_bytes());
            h.update(z.im.to_bits().to_le_bytes());
        }),
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn check_hermitian(x: &Matrix) -> Result<()> {
    let (r, c) = x.shape();
    if r == 0 || r != c {
        return Err(EdgeError::Domain(format!("spectrum of a {r}x{c} matrix")));
    }
    let defect = x.hermitian_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(EdgeError::Domain(format!("matrix {} is not Hermitian (defect {defect:.3e})", matrix_digest(x))));
    }
    Ok(())
}

fn eigen_generic<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, digest: impl Fn() -> String) -> Result<(Vec<f64>, f64)> {
    let eig = m.clone().try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS).ok_or_else(|| EdgeError::Numerical {
        digest: digest(),
        detail: "symmetric eigensolver did not converge".into(),
    })?;
    let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(EdgeError::Numerical { digest: digest(), detail: "non-finite eigenvalue".into() });
    }
    let norm = vals.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let (lo, hi) = (0..vals.len()).fold((0, 0), |(lo, hi), i| {
        (if vals[i] < vals[lo] { i } else { lo }, if vals[i] > vals[hi] { i } else { hi })
    });
    let mut worst: f64 = 0.0;
    for i in [lo, hi] {
        let v = eig.eigenvectors.column(i);
        let r = m * &v - v * T::from_real(vals[i]);
        worst = worst.max(r.norm());
    }
    let rel = if norm > 0.0 { worst / norm } else { worst };
    if !(rel <= RESIDUAL_TOL) {
        return Err(EdgeError::Numerical { digest: digest(), detail: format!("extreme eigenpair residual {rel:.3e}") });
    }
    Ok((vals, rel))
}

/// Full spectrum in descending order, with the relative residual of the
/// extreme eigenpairs.
pub fn spectrum_with_residual(x: &Matrix) -> Result<(Vec<f64>, f64)> {
    check_hermitian(x)?;
    let digest = || matrix_digest(x);
    let (mut vals, res) = match x {
        Matrix::Real(m) => eigen_generic(m, digest)?,
        Matrix::Complex(m) => eigen_generic(m, digest)?,
    };
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok((vals, res))
}

/// Full spectrum in descending order. The extreme eigenpairs are checked
/// against `‖Xv − λv‖ ≤ 1e-8‖X‖` on every call.
pub fn spectrum(x: &Matrix) -> Result<Vec<f64>> {
    spectrum_with_residual(x).map(|r| r.0)
}

fn tridiagonal(x: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let (d, e) = match x {
        Matrix::Real(m) => {
            let t = SymmetricTridiagonal::new(m.clone());
            (t.diagonal(), t.off_diagonal())
        }
        Matrix::Complex(m) => {
            let t = SymmetricTridiagonal::new(m.clone());
            (t.diagonal(), t.off_diagonal())
        }
    };
    (d.iter().copied().collect(), e.iter().copied().collect())
}

/// Number of eigenvalues below `x` (Sturm sequence of the LDLᵀ pivots).
fn count_below(d: &[f64], e2: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        q = d[i] - x - if i > 0 { e2[i - 1] / q } else { 0.0 };
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

struct Sturm {
    d: Vec<f64>,
    e2: Vec<f64>,
    lo: f64,
    hi: f64,
    scale: f64,
    pivmin: f64,
}

impl Sturm {
    fn new(x: &Matrix) -> Result<Self> {
        check_hermitian(x)?;
        let (d, e) = tridiagonal(x);
        if d.iter().chain(&e).any(|v| !v.is_finite()) {
            return Err(EdgeError::Numerical { digest: matrix_digest(x), detail: "non-finite tridiagonal entry".into() });
        }
        let n = d.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
            lo = lo.min(d[i] - r);
            hi = hi.max(d[i] + r);
        }
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        let e2: Vec<f64> = e.iter().map(|v| v * v).collect();
        let pivmin = f64::MIN_POSITIVE.max(e2.iter().fold(0.0_f64, |a, &b| a.max(b)) * f64::MIN_POSITIVE);
        Ok(Sturm { d, e2, lo: lo - 1e-12 * scale - 1e-300, hi: hi + 1e-12 * scale + 1e-300, scale, pivmin })
    }

    /// `i`-th smallest eigenvalue, 1-based.
    fn eigenvalue(&self, i: usize) -> f64 {
        let (mut a, mut b) = (self.lo, self.hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b || b - a <= 4.0 * f64::EPSILON * self.scale {
                break;
            }
            if count_below(&self.d, &self.e2, mid, self.pivmin) >= i {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    }

    fn extremes(&self, k: usize, side: EdgeSide) -> Vec<f64> {
        let n = self.d.len();
        (0..k)
            .map(|j| match side {
                EdgeSide::Upper => self.eigenvalue(n - j),
                EdgeSide::Lower => self.eigenvalue(j + 1),
            })
            .collect()
    }
}

fn check_k(x: &Matrix, k: usize) -> Result<()> {
    let n = x.shape().0;
    if k == 0 || k > n {
        return Err(EdgeError::Domain(format!("need 1 <= k <= {n}, got {k}")));
    }
    Ok(())
}

/// The `k` eigenvalues closest to one end of the spectrum, ordered from the
/// edge inward (descending for `Upper`, ascending for `Lower`).
///
/// Uses Householder tridiagonalization and bisection on Sturm counts, which
/// is much cheaper than a full decomposition when `k ≪ N`.
pub fn extreme_eigenvalues(x: &Matrix, k: usize, side: EdgeSide) -> Result<Vec<f64>> {
    check_k(x, k)?;
    Ok(Sturm::new(x)?.extremes(k, side))
}

/// `(λ_min, λ_max)` from a single tridiagonalization.
pub fn extreme_pair(x: &Matrix) -> Result<(f64, f64)> {
    let s = Sturm::new(x)?;
    Ok((s.eigenvalue(1), s.eigenvalue(s.d.len())))
}
