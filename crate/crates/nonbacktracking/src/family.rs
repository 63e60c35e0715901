use crate::{check_hermitian, CMatrix, NbError, Result};
use num_complex::Complex64;

/// `G_xz = H_zx H_xz`, the factor a seed picks up when a path steps back
/// onto its first edge.
fn retrace_factor(h: &CMatrix) -> CMatrix {
    CMatrix::from_fn(h.nrows(), h.ncols(), |x, z| h[(z, x)] * h[(x, z)])
}

/// `Σ_z S_xz H_zx` for each `x`.
fn diag_weights(s: &CMatrix, h: &CMatrix) -> Vec<Complex64> {
    (0..s.nrows()).map(|x| (0..s.ncols()).map(|z| s[(x, z)] * h[(z, x)]).sum()).collect()
}

fn row_scale(d: &[Complex64], v: &CMatrix) -> CMatrix {
    let mut out = v.clone();
    for (x, &w) in d.iter().enumerate() {
        out.row_mut(x).iter_mut().for_each(|z| *z *= w);
    }
    out
}

/// Paths whose first step is weighted by `seed` and later steps by `H`,
/// `V^S_m = S·V_{m−1} − D_S·V_{m−2} + V^{S∘G}_{m−2}` with
/// `D_S = diag(S·H)`. The correction family `S∘G` obeys the same recursion,
/// so every level `S∘G^k` is advanced together.
///
/// Without `plain`, level 0 is the plain family itself (`V_0 = I`).
fn run(h: &CMatrix, seed: &CMatrix, m_max: usize, plain: Option<&[CMatrix]>) -> Vec<CMatrix> {
    let n = h.nrows();
    let g = retrace_factor(h);
    let levels = m_max / 2 + 1;
    let mut seeds = vec![seed.clone()];
    for k in 1..levels {
        let next = seeds[k - 1].component_mul(&g);
        seeds.push(next);
    }
    let diags: Vec<Vec<Complex64>> = seeds.iter().map(|s| diag_weights(s, h)).collect();
    let mut fam: Vec<Vec<CMatrix>> = (0..levels).map(|k| Vec::with_capacity(m_max + 1 - 2 * k)).collect();
    for m in 0..=m_max {
        for k in (0..=m / 2).rev() {
            let j = m - 2 * k;
            let val = match j {
                0 if plain.is_none() && k == 0 => CMatrix::identity(n, n),
                0 => CMatrix::zeros(n, n),
                1 => seeds[k].clone(),
                _ => {
                    let p: &[CMatrix] = plain.unwrap_or(&fam[0]);
                    let mut v = &seeds[k] * &p[j - 1];
                    v -= row_scale(&diags[k], &p[j - 2]);
                    v += &fam[k + 1][j - 2];
                    v
                }
            };
            fam[k].push(val);
        }
    }
    fam.swap_remove(0)
}

/// `V_0, …, V_{n_max}` by the non-backtracking recursion. Loops
/// `x_i = x_{i+1}` are allowed; only immediate returns `x_i = x_{i+2}` are
/// excluded.
pub fn nb_powers(h: &CMatrix, n_max: usize) -> Result<Vec<CMatrix>> {
    check_hermitian(h, "H")?;
    Ok(run(h, h, n_max, None))
}

/// `V^S_0 = 0, V^S_1 = S, …, V^S_{m_max}`: non-backtracking paths whose
/// first step carries `S` instead of `H`.
pub fn seeded_powers(h: &CMatrix, seed: &CMatrix, m_max: usize) -> Result<Vec<CMatrix>> {
    check_hermitian(h, "H")?;
    if seed.shape() != h.shape() {
        return Err(NbError::Domain("seed and H sizes differ".into()));
    }
    let plain = run(h, h, m_max.saturating_sub(1), None);
    Ok(run(h, seed, m_max, Some(&plain)))
}

/// Non-backtracking powers of `H` together with the `Φ₃`-seeded family.
#[derive(Debug, Clone)]
pub struct NbFamily {
    h: CMatrix,
    powers: Vec<CMatrix>,
    phi3: Vec<CMatrix>,
}

impl NbFamily {
    pub fn new(h: &CMatrix, n_max: usize) -> Result<Self> {
        check_hermitian(h, "H")?;
        let powers = run(h, h, n_max, None);
        let phi3_seed = h.map(|z| -z * z.norm_sqr());
        let phi3 = run(h, &phi3_seed, n_max.saturating_sub(2), Some(&powers));
        Ok(Self { h: h.clone(), powers, phi3 })
    }

    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn n_max(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn powers(&self) -> &[CMatrix] {
        &self.powers
    }

    /// `V_n`, zero for negative `n`.
    pub fn v(&self, n: i64) -> CMatrix {
        match usize::try_from(n) {
            Ok(n) => self.powers[n].clone(),
            Err(_) => CMatrix::zeros(self.dim(), self.dim()),
        }
    }

    /// `Φ₃V_n` with `Φ₃` as first step and `n − 3` further steps: zero for
    /// `n ≤ 2`, `Φ₃` at `n = 3`.
    pub fn phi3_underline(&self, n: usize) -> CMatrix {
        if n < 3 {
            CMatrix::zeros(self.dim(), self.dim())
        } else {
            self.phi3[n - 2].clone()
        }
    }

    /// `V^S_0, …, V^S_{n_max}` reusing the cached plain family.
    pub fn seeded(&self, seed: &CMatrix) -> Result<Vec<CMatrix>> {
        if seed.shape() != self.h.shape() {
            return Err(NbError::Domain("seed and H sizes differ".into()));
        }
        Ok(run(&self.h, seed, self.n_max(), Some(&self.powers)))
    }
}
