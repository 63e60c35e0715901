use crate::spectrum::spectrum;
use crate::{EdgeError, Result};
use irm_ensembles::Matrix;
use irm_profiles::random_regular_graph;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest gap allowed between the sorted lift spectrum and the union.
pub const LIFT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    pub n: usize,
    pub degree: usize,
    /// Max gap between sorted `Spec(G̃)` and sorted `Spec(G) ⊎ Spec(σ∘G)`.
    pub max_deviation: f64,
    pub trace_lift: f64,
    pub trace_base: f64,
    pub passed: bool,
}

fn degree_of(g: &DMatrix<f64>) -> Result<usize> {
    let n = g.nrows();
    if n == 0 || !g.is_square() {
        return Err(EdgeError::Domain("adjacency matrix must be square and nonempty".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let v = g[(i, j)];
            if !(v == 0.0 || v == 1.0) || v != g[(j, i)] || (i == j && v != 0.0) {
                return Err(EdgeError::Domain(format!("G is not a simple graph at ({i}, {j})")));
            }
        }
    }
    let d = g.row(0).sum();
    if (0..n).any(|i| g.row(i).sum() != d) {
        return Err(EdgeError::Domain("G is not regular".into()));
    }
    Ok(d as usize)
}

fn check_signs(g: &DMatrix<f64>, sigma: &DMatrix<f64>) -> Result<()> {
    if sigma.shape() != g.shape() {
        return Err(EdgeError::Domain("sign matrix and G sizes differ".into()));
    }
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let s = sigma[(i, j)];
            let ok = if g[(i, j)] == 1.0 { s == 1.0 || s == -1.0 } else { s == 0.0 };
            if !ok || s != sigma[(j, i)] {
                return Err(EdgeError::Domain(format!("sign matrix does not match the edges of G at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Uniform ±1 signs on the edges of `g`.
pub fn random_signs(g: &DMatrix<f64>, seed: u64) -> DMatrix<f64> {
    let n = g.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if g[(i, j)] != 0.0 {
                let v = if rng.random::<bool>() { 1.0 } else { -1.0 };
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
    }
    s
}

/// `[[A₊, A₋], [A₋, A₊]]`, with `A₊` and `A₋` the positively and negatively
/// signed edges of `g`.
pub fn lift_adjacency(g: &DMatrix<f64>, sigma: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    degree_of(g)?;
    check_signs(g, sigma)?;
    let n = g.nrows();
    let plus = sigma.map(|s| if s > 0.0 { 1.0 } else { 0.0 });
    let minus = sigma.map(|s| if s < 0.0 { 1.0 } else { 0.0 });
    let mut lift = DMatrix::zeros(2 * n, 2 * n);
    for (r, c, block) in [(0, 0, &plus), (n, n, &plus), (0, n, &minus), (n, 0, &minus)] {
        lift.view_mut((r, c), (n, n)).copy_from(block);
    }
    Ok(lift)
}

/// Compares the lift spectrum with `Spec(G) ⊎ Spec(σ∘G)` as multisets.
pub fn lift_spectrum_check(g: &DMatrix<f64>, sigma: &DMatrix<f64>) -> Result<LiftReport> {
    let degree = degree_of(g)?;
    let lift = lift_adjacency(g, sigma)?;
    let mut union = spectrum(&Matrix::Real(g.clone()))?;
    union.extend(spectrum(&Matrix::Real(g.component_mul(sigma)))?);
    union.sort_by(|a, b| b.total_cmp(a));
    let lifted = spectrum(&Matrix::Real(lift.clone()))?;
    let max_deviation = lifted.iter().zip(&union).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (trace_lift, trace_base) = (lift.trace(), 2.0 * g.trace());
    Ok(LiftReport {
        n: g.nrows(),
        degree,
        max_deviation,
        trace_lift,
        trace_base,
        passed: max_deviation <= LIFT_TOLERANCE && trace_lift == trace_base,
    })
}

/// Lift check on a uniformly random `d`-regular graph with random signs.
pub fn random_lift_check(n: usize, d: usize, seed: u64) -> Result<LiftReport> {
    let g = random_regular_graph(n, d, seed)?;
    let sigma = random_signs(&g, seed ^ 0x5167);
    lift_spectrum_check(&g, &sigma)
}
