use crate::{CMatrix, NbError, Result};
use nalgebra::DMatrix;

/// `[[0, H], [H*, 0]]` on `[M] ⊔ [N]` for an `M×N` matrix `H`. Its
/// non-backtracking powers are the alternating `H`, `H*` path sums.
pub fn bipartite_block(h: &CMatrix) -> CMatrix {
    let (m, n) = h.shape();
    let mut z = CMatrix::zeros(m + n, m + n);
    z.view_mut((0, m), (m, n)).copy_from(h);
    z.view_mut((m, 0), (n, m)).copy_from(&h.adjoint());
    z
}

pub fn bipartite_profile(sigma2: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, n) = sigma2.shape();
    let mut s = DMatrix::zeros(m + n, m + n);
    s.view_mut((0, m), (m, n)).copy_from(sigma2);
    s.view_mut((m, 0), (n, m)).copy_from(&sigma2.transpose());
    s
}

/// Expected backtracking weight per vertex: 1 on the `[M]` side and `α` on
/// the `[N]` side.
pub fn side_constants(m: usize, n: usize, alpha: f64) -> Vec<f64> {
    (0..m + n).map(|v| if v < m { 1.0 } else { alpha }).collect()
}

/// Largest entry of `V_k` in a block that must vanish: the off-diagonal
/// blocks for even `k`, the diagonal blocks for odd `k`.
pub fn alternation_defect(powers: &[CMatrix], m: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, v) in powers.iter().enumerate() {
        let d = v.nrows();
        if m > d || !v.is_square() {
            return Err(NbError::Domain(format!("side size {m} does not fit a {d}x{} power", v.ncols())));
        }
        for i in 0..d {
            for j in 0..d {
                if ((i < m) == (j < m)) != (k % 2 == 0) {
                    worst = worst.max(v[(i, j)].norm());
                }
            }
        }
    }
    Ok(worst)
}
