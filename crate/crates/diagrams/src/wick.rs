use crate::gluing::gamma_perm;
use crate::sum::CompensatedSum;
use crate::{DiagramError, Result};
use irm_ensembles::Beta;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest `N^k · k` the oracle accepts, with `k = Σ m_j`.
pub const WICK_BUDGET: f64 = 6e7;

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn double_factorial(n: usize) -> f64 {
    // (n-1)!! for even n
    (1..n).step_by(2).map(|v| v as f64).product()
}

/// `E (h + c)^n` for real centered Gaussian `h` with variance `var`.
fn real_moment(n: usize, var: f64, c: Complex64) -> Complex64 {
    let mut s = Complex64::default();
    for j in (0..=n).step_by(2) {
        s += c.powu((n - j) as u32) * (binom(n, j) * double_factorial(j) * var.powi(j as i32 / 2));
    }
    s
}

/// `E (h + c)^p (h̄ + c̄)^q` for circular complex Gaussian `h` with
/// `E|h|² = var`.
fn complex_moment(p: usize, q: usize, var: f64, c: Complex64) -> Complex64 {
    let mut s = Complex64::default();
    let mut fact = 1.0;
    for i in 0..=p.min(q) {
        if i > 0 {
            fact *= i as f64;
        }
        let coef = binom(p, i) * binom(q, i) * fact * var.powi(i as i32);
        s += c.powu((p - i) as u32) * c.conj().powu((q - i) as u32) * coef;
    }
    s
}

/// `E Π_j Tr (H + A)^{m_j}` by summing over all index paths and applying
/// Wick's theorem entry by entry. Shares nothing with the gluing machinery.
///
/// `H` is Gaussian with `E|H_xy|² = σ²_xy` off the diagonal; its diagonal
/// variance is `2σ²_xx` in the real case and `σ²_xx` in the complex case,
/// and `E H_xy² = 0` off the diagonal in the complex case.
pub fn wick_moment(perimeters: &[usize], sigma2: &DMatrix<f64>, a: Option<&DMatrix<Complex64>>, beta: Beta) -> Result<Complex64> {
    let n = sigma2.nrows();
    if n == 0 || sigma2.ncols() != n {
        return Err(DiagramError::Domain("variance profile must be square and nonempty".into()));
    }
    if let Some(a) = a {
        if a.shape() != (n, n) {
            return Err(DiagramError::Domain("deformation and profile sizes differ".into()));
        }
        if beta == Beta::Real && a.iter().any(|z| z.im != 0.0) {
            return Err(DiagramError::Domain("a real ensemble needs a real deformation".into()));
        }
    }
    let k: usize = perimeters.iter().sum();
    let est = (n as f64).powi(k as i32) * k.max(1) as f64;
    if est > WICK_BUDGET {
        return Err(DiagramError::Budget { what: "Wick oracle".into(), estimate: est, limit: WICK_BUDGET });
    }
    let empty = perimeters.iter().filter(|&&m| m == 0).count();
    let g = gamma_perm(perimeters);
    let entry = |x: usize, y: usize| a.map_or(Complex64::default(), |a| a[(x, y)]);
    let mut idx = vec![0usize; k];
    let mut acc = CompensatedSum::default();
    let mut groups: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(k);
    loop {
        groups.clear();
        for i in 0..k {
            let (x, y) = (idx[i], idx[g[i]]);
            let key = (x.min(y), x.max(y));
            match groups.iter_mut().find(|gr| (gr.0, gr.1) == key) {
                Some(gr) if x <= y => gr.2 += 1,
                Some(gr) => gr.3 += 1,
                None if x <= y => groups.push((key.0, key.1, 1, 0)),
                None => groups.push((key.0, key.1, 0, 1)),
            }
        }
        let mut val = Complex64::new(1.0, 0.0);
        for &(x, y, p, q) in &groups {
            let var = sigma2[(x, y)];
            let c = entry(x, y);
            val *= if x == y {
                let v = if beta == Beta::Real { 2.0 * var } else { var };
                real_moment(p + q, v, c)
            } else if beta == Beta::Real {
                real_moment(p + q, var, c)
            } else {
                complex_moment(p, q, var, c)
            };
            if val == Complex64::default() {
                break;
            }
        }
        acc.add(val);
        let mut carry = true;
        for d in idx.iter_mut() {
            if *d + 1 < n {
                *d += 1;
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            break;
        }
    }
    Ok(acc.value() * (n as f64).powi(empty as i32))
}
