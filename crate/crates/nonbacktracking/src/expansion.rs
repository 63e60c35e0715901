use crate::bipartite::{bipartite_block, bipartite_profile, side_constants};
use crate::family::NbFamily;
use crate::phi::{check_profile, phi_ops};
use crate::{max_abs, CMatrix, NbError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest residual accepted for a per-realization identity.
pub const PATH_TOLERANCE: f64 = 1e-8;
/// Largest estimated flop count of one expansion.
pub const EXPANSION_BUDGET: f64 = 1e11;

const MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathModel {
    Wigner,
    Wishart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathExpansionCheck {
    pub model: PathModel,
    pub order: usize,
    pub dim: usize,
    pub deformed: bool,
    /// Number of `(k, α, ℓ)` terms with nonvanishing insertions.
    pub terms: f64,
    pub lhs_max: f64,
    /// Max-abs entrywise gap between the polynomial and the path sum.
    pub residual: f64,
    /// Gap in the three-term recursion with `Φ₂`, `Φ₃` and `Φ_A`
    /// corrections, over all lengths used.
    pub recursion_residual: f64,
    pub passed: bool,
}

/// Terms in the expansion of total length `total` with `a_letters`
/// deformation letters.
pub fn expansion_term_count(total: usize, a_letters: usize) -> f64 {
    let letters = |l: usize| (l >= 2) as usize as f64 + (l >= 3) as usize as f64 + if l >= 1 { a_letters as f64 } else { 0.0 };
    let mut tails = vec![1.0];
    for r in 1..=total {
        let t = (1..=r).map(|l| letters(l) * tails[r - l]).sum();
        tails.push(t);
    }
    tails.iter().sum()
}

fn nonzero(a: Option<&CMatrix>) -> Option<&CMatrix> {
    a.filter(|a| a.iter().any(|z| *z != Complex64::default()))
}

fn budget(total: usize, dim: usize) -> Result<()> {
    let estimate = 8.0 * ((total + 1) as f64).powi(2) * (dim as f64).powi(3);
    if estimate > EXPANSION_BUDGET {
        return Err(NbError::Budget { what: "path expansion".into(), estimate, limit: EXPANSION_BUDGET });
    }
    Ok(())
}

fn check_margins(v: impl Iterator<Item = f64>, target: f64, what: &str) -> Result<()> {
    for (i, s) in v.enumerate() {
        if (s - target).abs() > MARGIN_TOL {
            return Err(NbError::Domain(format!("{what} {i} of the profile sums to {s}, expected {target}")));
        }
    }
    Ok(())
}

/// Shared right-hand side. With `ins(l) = Φ₂V_{l−2} + underline(Φ₃V_l) +
/// Σ_a Φ_a V_{l−1}` and `T(0) = I`, `T(r) = Σ_{l=1}^r ins(l) T(r − l)`, the
/// expansion is `Σ_l V_l T(total − l)`; `T` is the memo over suffixes.
struct PathSum<'a> {
    fam: &'a NbFamily,
    phi2: &'a CMatrix,
    letters: Vec<CMatrix>,
    consts: &'a [f64],
}

impl PathSum<'_> {
    fn insertion(&self, l: usize) -> CMatrix {
        let d = self.fam.dim();
        let mut m = CMatrix::zeros(d, d);
        if l >= 2 {
            m += self.phi2 * &self.fam.powers()[l - 2];
        }
        m += self.fam.phi3_underline(l);
        for a in &self.letters {
            m += a * &self.fam.powers()[l - 1];
        }
        m
    }

    fn total(&self, total: usize) -> CMatrix {
        let d = self.fam.dim();
        let ins: Vec<CMatrix> = (0..=total).map(|l| if l == 0 { CMatrix::zeros(d, d) } else { self.insertion(l) }).collect();
        let mut tails = vec![CMatrix::identity(d, d)];
        for r in 1..=total {
            let mut t = CMatrix::zeros(d, d);
            for l in 1..=r {
                t += &ins[l] * &tails[r - l];
            }
            tails.push(t);
        }
        let mut w = CMatrix::zeros(d, d);
        for l in 0..=total {
            w += &self.fam.powers()[l] * &tails[total - l];
        }
        w
    }

    /// `V_m` against `(H + A)V_{m−1} − cV_{m−2} − Φ₂V_{m−2} − underline(Φ₃V_m)
    /// − Σ_a Φ_a V_{m−1}` for `2 ≤ m ≤ total`.
    fn recursion_residual(&self, y: &CMatrix, total: usize) -> f64 {
        let p = self.fam.powers();
        (2..=total)
            .map(|m| {
                let mut r = y * &p[m - 1] - self.phi2 * &p[m - 2] - self.fam.phi3_underline(m);
                let mut back = p[m - 2].clone();
                for (x, &c) in self.consts.iter().enumerate() {
                    back.row_mut(x).iter_mut().for_each(|z| *z *= c);
                }
                r -= back;
                for a in &self.letters {
                    r -= a * &p[m - 1];
                }
                max_abs(&(r - &p[m]))
            })
            .fold(0.0, f64::max)
    }
}

/// Checks `U_n((H+A)/2) = Σ_k Σ_{α ∈ {2,3,A}^k} Σ_{ℓ} V_{ℓ₀} underline(Φ_{α₁}V_{ℓ₁})
/// ⋯ underline(Φ_{α_k}V_{ℓ_k})` for one realization. The profile rows must
/// sum to 1; without a deformation the alphabet is `{2, 3}`.
pub fn verify_wigner_path_expansion(h: &CMatrix, a: Option<&CMatrix>, sigma2: &DMatrix<f64>, n: usize) -> Result<PathExpansionCheck> {
    wigner(h, a, sigma2, n).map(|r| r.0)
}

/// The right-hand side of the Wigner path expansion on its own.
pub fn wigner_path_sum(h: &CMatrix, a: Option<&CMatrix>, sigma2: &DMatrix<f64>, n: usize) -> Result<CMatrix> {
    wigner(h, a, sigma2, n).map(|r| r.1)
}

fn wigner(h: &CMatrix, a: Option<&CMatrix>, sigma2: &DMatrix<f64>, n: usize) -> Result<(PathExpansionCheck, CMatrix)> {
    let d = h.nrows();
    check_profile(sigma2, h.shape())?;
    check_margins(sigma2.row_iter().map(|r| r.sum()), 1.0, "row")?;
    if let Some(a) = a {
        if a.shape() != h.shape() {
            return Err(NbError::Domain("deformation and H sizes differ".into()));
        }
    }
    budget(n, d)?;
    let a = nonzero(a);
    let fam = NbFamily::new(h, n)?;
    let (phi2, _) = phi_ops(h, sigma2)?;
    let consts = vec![1.0; d];
    let sum = PathSum { fam: &fam, phi2: &phi2, letters: a.into_iter().cloned().collect(), consts: &consts };
    let y = a.map_or_else(|| h.clone(), |a| h + a);

    let mut u = vec![CMatrix::identity(d, d), y.clone()];
    for k in 2..=n {
        let next = &y * &u[k - 1] - &u[k - 2];
        u.push(next);
    }
    let lhs = &u[n];
    let rhs = sum.total(n);
    let residual = max_abs(&(lhs - &rhs));
    let check = PathExpansionCheck {
        model: PathModel::Wigner,
        order: n,
        dim: d,
        deformed: a.is_some(),
        terms: expansion_term_count(n, a.is_some() as usize),
        lhs_max: max_abs(lhs),
        residual,
        recursion_residual: sum.recursion_residual(&y, n),
        passed: residual <= PATH_TOLERANCE,
    };
    Ok((check, rhs))
}

/// Checks `𝒬_n(X) = Σ_k Σ_{α ∈ {2,3,A,A*}^k} Σ_{ℓ₀+⋯+ℓ_k = 2n} V_{ℓ₀}
/// underline(Φ_{α₁}V_{ℓ₁}) ⋯` for `X = (H+A)(H+A)*` and an `M×N` matrix
/// `H`, with the bipartite powers alternating `H` and `H*`. The profile
/// rows must sum to 1 and its columns to `α`.
pub fn verify_wishart_path_expansion(
    h: &CMatrix,
    a: Option<&CMatrix>,
    sigma2: &DMatrix<f64>,
    n: usize,
    alpha: f64,
) -> Result<PathExpansionCheck> {
    wishart(h, a, sigma2, n, alpha).map(|r| r.0)
}

/// The `[M]×[M]` block of the Wishart path sum at total length `2n`.
pub fn wishart_path_sum(h: &CMatrix, a: Option<&CMatrix>, sigma2: &DMatrix<f64>, n: usize, alpha: f64) -> Result<CMatrix> {
    wishart(h, a, sigma2, n, alpha).map(|r| r.1)
}

fn wishart(h: &CMatrix, a: Option<&CMatrix>, sigma2: &DMatrix<f64>, n: usize, alpha: f64) -> Result<(PathExpansionCheck, CMatrix)> {
    let (m, cols) = h.shape();
    if m == 0 || cols == 0 {
        return Err(NbError::Domain("H must be nonempty".into()));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(NbError::Domain(format!("α must be positive, got {alpha}")));
    }
    check_profile(sigma2, h.shape())?;
    check_margins(sigma2.row_iter().map(|r| r.sum()), 1.0, "row")?;
    check_margins(sigma2.column_iter().map(|c| c.sum()), alpha, "column")?;
    if let Some(a) = a {
        if a.shape() != h.shape() {
            return Err(NbError::Domain("deformation and H sizes differ".into()));
        }
    }
    let total = 2 * n;
    let d = m + cols;
    budget(total, d)?;
    let a = nonzero(a);
    let z = bipartite_block(h);
    let fam = NbFamily::new(&z, total)?;
    let (phi2, _) = phi_ops(&z, &bipartite_profile(sigma2))?;
    let consts = side_constants(m, cols, alpha);
    // Φ_A maps [N] to [M] and Φ_{A*} maps [M] to [N].
    let letters: Vec<CMatrix> = a
        .map(|a| {
            let mut top = CMatrix::zeros(d, d);
            top.view_mut((0, m), (m, cols)).copy_from(a);
            let mut bottom = CMatrix::zeros(d, d);
            bottom.view_mut((m, 0), (cols, m)).copy_from(&a.adjoint());
            vec![top, bottom]
        })
        .unwrap_or_default();
    let sum = PathSum { fam: &fam, phi2: &phi2, letters, consts: &consts };
    let b = a.map_or_else(|| h.clone(), |a| h + a);
    let x = &b * b.adjoint();

    let id = CMatrix::identity(m, m);
    let mut q = vec![id.clone(), &x - &id];
    for k in 2..=n {
        let next = (&x - &id * Complex64::new(1.0 + alpha, 0.0)) * &q[k - 1] - &q[k - 2] * Complex64::new(alpha, 0.0);
        q.push(next);
    }
    let lhs = &q[n];
    let rhs = sum.total(total).view((0, 0), (m, m)).into_owned();
    let residual = max_abs(&(lhs - &rhs));
    let y = bipartite_block(&b);
    let check = PathExpansionCheck {
        model: PathModel::Wishart,
        order: n,
        dim: d,
        deformed: a.is_some(),
        terms: expansion_term_count(total, 2 * a.is_some() as usize),
        lhs_max: max_abs(lhs),
        residual,
        recursion_residual: sum.recursion_residual(&y, total),
        passed: residual <= PATH_TOLERANCE,
    };
    Ok((check, rhs))
}
