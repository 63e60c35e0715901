use crate::{MarkovError, Result};
use irm_profiles::{ProfileKind, VarianceProfile};
use nalgebra::DMatrix;

/// Row-sum drift that aborts a power computation.
pub const DRIFT_LIMIT: f64 = 1e-6;
/// Dimension from which products use compensated summation.
pub const COMPENSATED_FROM: usize = 512;

/// Streams `p_1, p_2, ...` of a stochastic matrix by repeated multiplication.
pub struct TransitionPowers {
    p: DMatrix<f64>,
    current: Option<DMatrix<f64>>,
    scratch: DMatrix<f64>,
    n: usize,
}

impl TransitionPowers {
    pub fn new(p: DMatrix<f64>) -> Self {
        let (r, c) = p.shape();
        Self { p, current: None, scratch: DMatrix::zeros(r, c), n: 0 }
    }

    pub fn from_profile(profile: &VarianceProfile) -> Self {
        Self::new(profile.transition_matrix())
    }

    /// Index of the power returned by the last call to `advance`.
    pub fn step(&self) -> usize {
        self.n
    }

    /// Advances to the next power and returns it.
    pub fn advance(&mut self) -> Result<&DMatrix<f64>> {
        match self.current.take() {
            None => self.current = Some(self.p.clone()),
            Some(cur) => {
                if cur.nrows() >= COMPENSATED_FROM {
                    compensated_mul(&cur, &self.p, &mut self.scratch);
                } else {
                    cur.mul_to(&self.p, &mut self.scratch);
                }
                self.current = Some(std::mem::replace(&mut self.scratch, cur));
            }
        }
        self.n += 1;
        let cur = self.current.as_ref().expect("set above");
        let drift = max_row_drift(cur);
        if drift > DRIFT_LIMIT {
            return Err(MarkovError::Drift { n: self.n, drift });
        }
        Ok(cur)
    }
}

fn max_row_drift(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows()).map(|i| (m.row(i).iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
}

/// `out = a * b` with Kahan-compensated inner products, fixed summation order.
fn compensated_mul(a: &DMatrix<f64>, b: &DMatrix<f64>, out: &mut DMatrix<f64>) {
    let n = a.ncols();
    let bt = b.transpose();
    for i in 0..a.nrows() {
        let row: Vec<f64> = a.row(i).iter().copied().collect();
        for j in 0..b.ncols() {
            let col = bt.row(j);
            let (mut s, mut c) = (0.0f64, 0.0f64);
            for k in 0..n {
                let y = row[k] * col[k] - c;
                let t = s + y;
                c = (t - s) - y;
                s = t;
            }
            out[(i, j)] = s;
        }
    }
}

/// All powers `p_1..p_{n_max}` of the profile chain.
pub fn transition_powers(profile: &VarianceProfile, n_max: usize) -> Result<Vec<DMatrix<f64>>> {
    let states = match profile.kind() {
        ProfileKind::Square => profile.n(),
        ProfileKind::Bipartite => profile.n_rows() + profile.n_cols(),
    };
    let budget = states.saturating_mul(states).saturating_mul(n_max);
    if budget > 1 << 28 {
        return Err(MarkovError::Budget(format!(
            "{n_max} dense powers of a {states}-state chain; use TransitionPowers to stream"
        )));
    }
    let mut it = TransitionPowers::from_profile(profile);
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        out.push(it.advance()?.clone());
    }
    Ok(out)
}
