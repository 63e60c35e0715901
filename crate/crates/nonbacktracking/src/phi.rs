use crate::bipartite::{bipartite_block, bipartite_profile};
use crate::{CMatrix, NbError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) fn check_profile(sigma2: &DMatrix<f64>, shape: (usize, usize)) -> Result<()> {
    if sigma2.shape() != shape {
        return Err(NbError::Domain(format!("profile is {:?}, matrix is {:?}", sigma2.shape(), shape)));
    }
    if sigma2.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(NbError::Domain("profile entries must be finite and nonnegative".into()));
    }
    Ok(())
}

/// `(Φ₂, Φ₃)` with `(Φ₂)_xy = δ_xy Σ_z (|H_xz|² − σ²_xz)` and
/// `(Φ₃)_xy = −|H_xy|² H_xy`.
pub fn phi_ops(h: &CMatrix, sigma2: &DMatrix<f64>) -> Result<(CMatrix, CMatrix)> {
    check_profile(sigma2, h.shape())?;
    let n = h.nrows();
    let mut phi2 = CMatrix::zeros(n, n);
    for x in 0..n.min(h.ncols()) {
        let s: f64 = (0..h.ncols()).map(|z| h[(x, z)].norm_sqr() - sigma2[(x, z)]).sum();
        phi2[(x, x)] = Complex64::new(s, 0.0);
    }
    Ok((phi2, h.map(|z| -z * z.norm_sqr())))
}

/// Both sides' `Φ₂` and `Φ₃` for an `M×N` matrix, as operators on
/// `[M] ⊔ [N]`.
pub fn wishart_phi_ops(h: &CMatrix, sigma2: &DMatrix<f64>) -> Result<(CMatrix, CMatrix)> {
    check_profile(sigma2, h.shape())?;
    phi_ops(&bipartite_block(h), &bipartite_profile(sigma2))
}
