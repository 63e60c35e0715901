use crate::{CMatrix, NbError, Result};
use num_complex::Complex64;

/// Largest number of path prefixes the direct enumeration visits.
pub const BRUTE_BUDGET: f64 = 2e8;

fn support(m: &CMatrix) -> Vec<Vec<(usize, Complex64)>> {
    (0..m.nrows()).map(|x| (0..m.ncols()).filter(|&y| m[(x, y)] != Complex64::default()).map(|y| (y, m[(x, y)])).collect()).collect()
}

struct Walk<'a> {
    rest: &'a [Vec<(usize, Complex64)>],
    m_max: usize,
    out: Vec<CMatrix>,
    path: Vec<usize>,
}

impl Walk<'_> {
    fn extend(&mut self, w: Complex64) {
        let m = self.path.len() - 1;
        let (x0, last) = (self.path[0], self.path[m]);
        self.out[m][(x0, last)] += w;
        if m == self.m_max {
            return;
        }
        let back = if m >= 1 { Some(self.path[m - 1]) } else { None };
        for &(y, hy) in &self.rest[last] {
            if Some(y) == back {
                continue;
            }
            self.path.push(y);
            self.extend(w * hy);
            self.path.pop();
        }
    }
}

fn enumerate(h: &CMatrix, first: &CMatrix, m_max: usize, identity: bool) -> Result<Vec<CMatrix>> {
    let n = h.nrows();
    if n == 0 || !h.is_square() || first.shape() != h.shape() {
        return Err(NbError::Domain("matrices must be square, nonempty and of equal size".into()));
    }
    let rest = support(h);
    let head = support(first);
    let dh = rest.iter().map(Vec::len).max().unwrap_or(0) as f64;
    let df = head.iter().map(Vec::len).max().unwrap_or(0) as f64;
    let estimate = n as f64 * (1.0 + df * (0..m_max).map(|i| dh.powi(i as i32)).sum::<f64>());
    if estimate > BRUTE_BUDGET {
        return Err(NbError::Budget { what: "direct path enumeration".into(), estimate, limit: BRUTE_BUDGET });
    }
    let mut walk = Walk { rest: &rest, m_max, out: vec![CMatrix::zeros(n, n); m_max + 1], path: Vec::with_capacity(m_max + 1) };
    for x0 in 0..n {
        if m_max == 0 {
            break;
        }
        for &(y, w) in &head[x0] {
            walk.path.clear();
            walk.path.extend([x0, y]);
            walk.extend(w);
        }
    }
    if identity {
        walk.out[0] = CMatrix::identity(n, n);
    }
    Ok(walk.out)
}

/// `V_0, …, V_{n_max}` summed directly over index sequences with
/// `Π 1(x_i ≠ x_{i+2})`.
pub fn nb_powers_brute(h: &CMatrix, n_max: usize) -> Result<Vec<CMatrix>> {
    enumerate(h, h, n_max, true)
}

/// Direct sum for the family whose first step carries `seed`.
pub fn seeded_powers_brute(h: &CMatrix, seed: &CMatrix, m_max: usize) -> Result<Vec<CMatrix>> {
    enumerate(h, seed, m_max, false)
}
