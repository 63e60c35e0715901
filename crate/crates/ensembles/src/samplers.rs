use crate::law::{Beta, EntryLaw};
use crate::matrix::Matrix;
use crate::rng::stream;
use crate::{EnsembleError, Result};
use irm_profiles::{ProfileKind, VarianceProfile};
use nalgebra::DMatrix;

/// Symmetric (or Hermitian) noise matrix with independent upper-triangular
/// entries. Row `i` is drawn from its own block stream.
pub fn sample_noise(n: usize, law: EntryLaw, beta: Beta, seed: u64, replica: u64) -> Result<Matrix> {
    law.validate(beta)?;
    if n == 0 {
        return Err(EnsembleError::Domain("matrix dimension must be positive".into()));
    }
    Ok(match beta {
        Beta::Real => {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                let mut rng = stream(seed, replica, i as u32);
                for j in i..n {
                    let v = law.draw_real(i == j, &mut rng);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            Matrix::Real(m)
        }
        Beta::Complex => {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                let mut rng = stream(seed, replica, i as u32);
                for j in i..n {
                    let v = law.draw_complex(i == j, &mut rng);
                    m[(i, j)] = v;
                    m[(j, i)] = v.conj();
                }
            }
            Matrix::Complex(m)
        }
    })
}

/// Gaussian Wigner matrix with `E W_ii² = 2`, `E W_ij² = 1` (real) or
/// `E W_ii² = 1`, `E|W_ij|² = 1`, `E W_ij² = 0` (complex).
pub fn sample_wigner(n: usize, beta: Beta, seed: u64) -> Result<Matrix> {
    sample_noise(n, EntryLaw::Gaussian, beta, seed, 0)
}

/// θ-GOE matrix `B_ij W̃_ij` with `B_ij ~ √θ·Bern(1/θ)`.
pub fn sample_theta_goe(n: usize, theta: f64, seed: u64) -> Result<Matrix> {
    sample_noise(n, EntryLaw::ThetaGoe { theta }, Beta::Real, seed, 0)
}

/// GOE–GUE interpolating ensemble; `alpha_mix = ∞` gives a purely
/// imaginary antisymmetric matrix.
pub fn sample_interpolating(n: usize, alpha_mix: f64, seed: u64) -> Result<Matrix> {
    let alpha_mix = if alpha_mix.is_infinite() { None } else { Some(alpha_mix) };
    sample_noise(n, EntryLaw::Interpolating { alpha_mix }, Beta::Complex, seed, 0)
}

/// Entrywise standard deviations `σ_ij` of a profile.
pub fn profile_sigma(profile: &VarianceProfile) -> DMatrix<f64> {
    profile.dense().map(f64::sqrt)
}

/// `X = Σ∘W + A`.
pub fn assemble(profile: &VarianceProfile, w: &Matrix, deformation: Option<&Matrix>) -> Result<Matrix> {
    assemble_with_sigma(&profile_sigma(profile), w, deformation)
}

pub fn assemble_with_sigma(sigma: &DMatrix<f64>, w: &Matrix, deformation: Option<&Matrix>) -> Result<Matrix> {
    let h = w.hadamard(sigma)?;
    match deformation {
        None => Ok(h),
        Some(a) => h.try_add(a),
    }
}

/// `W<_ij = W_ij·1(|W_ij| < N^{ζ/2})`, with the fraction of entries removed.
pub fn truncate_heavy(w: &Matrix, n: usize, zeta: f64) -> Result<(Matrix, f64)> {
    if !(zeta > 0.0 && zeta < 1.0 / 3.0) {
        return Err(EnsembleError::Domain(format!("ζ must lie in (0, 1/3), got {zeta}")));
    }
    let cut = (n as f64).powf(zeta / 2.0);
    let total = {
        let (r, c) = w.shape();
        (r * c) as f64
    };
    let mut removed = 0usize;
    let out = match w {
        Matrix::Real(m) => Matrix::Real(m.map(|v| {
            if v.abs() < cut {
                v
            } else {
                removed += 1;
                0.0
            }
        })),
        Matrix::Complex(m) => Matrix::Complex(m.map(|v| {
            if v.norm() < cut {
                v
            } else {
                removed += 1;
                num_complex::Complex64::new(0.0, 0.0)
            }
        })),
    };
    Ok((out, removed as f64 / total))
}

/// `M × N` noise with independent unit-variance entries.
pub fn sample_rect_noise(m: usize, n: usize, law: EntryLaw, beta: Beta, seed: u64, replica: u64) -> Result<Matrix> {
    law.validate(beta)?;
    Ok(match beta {
        Beta::Real => {
            let mut w = DMatrix::zeros(m, n);
            for i in 0..m {
                let mut rng = stream(seed, replica, i as u32);
                for j in 0..n {
                    w[(i, j)] = law.draw_unit(&mut rng);
                }
            }
            Matrix::Real(w)
        }
        Beta::Complex => {
            let mut w = DMatrix::zeros(m, n);
            for i in 0..m {
                let mut rng = stream(seed, replica, i as u32);
                for j in 0..n {
                    w[(i, j)] = law.draw_unit_complex(&mut rng);
                }
            }
            Matrix::Complex(w)
        }
    })
}

/// Checks `‖A‖ ≤ √α + max(τ_j, 0)·N^{-1/3}` for a rectangular deformation.
pub fn check_wishart_deformation(a: &Matrix, alpha: f64, n: usize, tau_max: f64) -> Result<()> {
    let bound = alpha.sqrt() + tau_max.max(0.0) * (n as f64).powf(-1.0 / 3.0);
    let norm = a.operator_norm();
    if norm > bound * (1.0 + 1e-12) + 1e-12 {
        return Err(EnsembleError::Domain(format!("deformation norm {norm} exceeds {bound}")));
    }
    Ok(())
}

/// `X = (H + A)(H + A)*` with `H = Σ∘W` on a bipartite profile.
pub fn sample_wishart(
    profile: &VarianceProfile,
    beta: Beta,
    deformation: Option<&crate::Deformation>,
    seed: u64,
    replica: u64,
) -> Result<Matrix> {
    if profile.kind() != ProfileKind::Bipartite {
        return Err(EnsembleError::Domain("Wishart sampling needs a bipartite profile".into()));
    }
    let (m, n) = (profile.n_rows(), profile.n_cols());
    let w = sample_rect_noise(m, n, EntryLaw::Gaussian, beta, seed, replica)?;
    let a = match deformation {
        None => None,
        Some(d) => {
            let a = d.materialize_rect(m, n, beta)?;
            let tau = d.spikes.iter().copied().fold(0.0, f64::max);
            check_wishart_deformation(&a, profile.alpha(), n, tau)?;
            Some(a)
        }
    };
    Ok(assemble(profile, &w, a.as_ref())?.gram())
}
