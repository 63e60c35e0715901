use crate::{ProfileError, Result};
use nalgebra::DMatrix;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn cycle_graph(n: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let j = (i + 1) % n;
        if i != j {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
    }
    a
}

pub fn complete_graph(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 })
}

/// Random simple `d`-regular graph from the configuration model. Stubs are
/// paired one at a time, each partner drawn uniformly among those that keep
/// the graph simple; a dead end restarts the pairing. The law is
/// asymptotically uniform for fixed `d`.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<DMatrix<f64>> {
    if d >= n || (n * d) % 2 == 1 {
        return Err(ProfileError::Domain(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 10_000;
    'attempt: for _ in 0..ATTEMPTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut a = DMatrix::zeros(n, n);
        while !stubs.is_empty() {
            let i = rng.random_range(0..stubs.len());
            let u = stubs.swap_remove(i);
            let ok: Vec<usize> = (0..stubs.len()).filter(|&j| stubs[j] != u && a[(u, stubs[j])] == 0.0).collect();
            let Some(&j) = ok.choose(&mut rng) else { continue 'attempt };
            let v = stubs.swap_remove(j);
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        return Ok(a);
    }
    Err(ProfileError::Convergence { iterations: ATTEMPTS, defect: f64::NAN })
}
