use crate::{MarkovError, Result};
use irm_profiles::{Torus, VarianceProfile};
use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// In-place d-dimensional DFT on a flattened `L^d` array (last axis fastest).
fn fft_nd(data: &mut [Complex64], side: usize, dim: usize, dir: FftDirection) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft(side, dir);
    let mut line = vec![Complex64::new(0.0, 0.0); side];
    for axis in 0..dim {
        let stride = side.pow((dim - 1 - axis) as u32);
        let block = stride * side;
        for start in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (k, v) in line.iter_mut().enumerate() {
                    *v = data[start + off + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[start + off + k * stride] = *v;
                }
            }
        }
    }
}

/// Fourier symbol of a circulant band profile; `p_n(0, x) = N⁻¹ Σ_k p̂(k)ⁿ e^{2πik·x/L}`.
#[derive(Debug, Clone)]
pub struct CirculantSymbol {
    torus: Torus,
    symbol: Vec<f64>,
}

impl CirculantSymbol {
    pub fn new(profile: &VarianceProfile) -> Result<Self> {
        let (torus, row) = profile
            .circulant_row()
            .ok_or_else(|| MarkovError::Unsupported("Fourier path needs a circulant profile".into()))?;
        let mut data: Vec<Complex64> = row.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        fft_nd(&mut data, torus.side, torus.dimension, FftDirection::Forward);
        // Even kernels have real symbols; drop rounding noise in the imaginary part.
        Ok(Self { torus: torus.clone(), symbol: data.iter().map(|c| c.re).collect() })
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    /// Largest modulus of a nontrivial eigenvalue.
    pub fn second_eigenvalue(&self) -> f64 {
        self.symbol.iter().skip(1).map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Bound on `max_x |p_n(0,x) - 1/N|` from the symbol: `N⁻¹ Σ_{k≠0} |p̂(k)|ⁿ`.
    pub fn tail_bound(&self, n: usize) -> f64 {
        let nn = self.symbol.len() as f64;
        self.symbol.iter().skip(1).map(|v| v.abs().powi(n as i32)).sum::<f64>() / nn
    }

    /// Full row `x ↦ p_n(0, x)`.
    pub fn row(&self, n: usize) -> Vec<f64> {
        let mut data: Vec<Complex64> = self.symbol.iter().map(|v| Complex64::new(v.powi(n as i32), 0.0)).collect();
        fft_nd(&mut data, self.torus.side, self.torus.dimension, FftDirection::Inverse);
        let nn = data.len() as f64;
        data.iter().map(|c| c.re / nn).collect()
    }
}

/// `p_n(0, x)` of a circulant band profile through the Fourier representation.
pub fn band_transition_fourier(profile: &VarianceProfile, n: usize, x: usize) -> Result<f64> {
    let s = CirculantSymbol::new(profile)?;
    let row = s.row(n);
    row.get(x).copied().ok_or_else(|| MarkovError::Domain(format!("site {x} outside the torus")))
}
