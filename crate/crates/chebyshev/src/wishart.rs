use crate::poly::{binom, RatPoly};
use crate::report::IdentityReport;
use crate::scalar::{cheb_eval, cheb_poly, ChebKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn pow(x: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// Marchenko–Pastur moments `μ_0..μ_{k_max}`,
/// `μ_k = Σ_{j<k} C(k,j) C(k-1,j) α^j / (j+1)`.
pub fn mp_moments(alpha: &BigRational, k_max: usize) -> Vec<BigRational> {
    let mut mu = vec![BigRational::one()];
    for k in 1..=k_max {
        let mut s = BigRational::zero();
        for j in 0..k {
            s += BigRational::new(binom(k, j) * binom(k - 1, j), BigInt::from(j + 1)) * pow(alpha, j);
        }
        mu.push(s);
    }
    mu
}

/// Table `C[m][n] = C_MP(m, n)` for `m, n ≤ m_max`.
///
/// `C_MP(m, 0) = μ_m`; for `1 ≤ n ≤ m` it is `(m/n)` times the sum over
/// compositions `k_1 + ... + k_n = m` (`k_i ≥ 1`) of `Π μ_{k_i}`; zero for `n > m`.
pub fn cmp_table(alpha: &BigRational, m_max: usize) -> Vec<Vec<BigRational>> {
    let mu = mp_moments(alpha, m_max);
    // comp[n][m]: sum over compositions of m into n positive parts.
    let mut comp = vec![vec![BigRational::zero(); m_max + 1]; m_max + 1];
    comp[0][0] = BigRational::one();
    for n in 1..=m_max {
        for m in n..=m_max {
            let mut s = BigRational::zero();
            for k in 1..=m - (n - 1) {
                if !comp[n - 1][m - k].is_zero() {
                    s += &mu[k] * &comp[n - 1][m - k];
                }
            }
            comp[n][m] = s;
        }
    }
    let mut c = vec![vec![BigRational::zero(); m_max + 1]; m_max + 1];
    for m in 0..=m_max {
        c[m][0] = mu[m].clone();
        for n in 1..=m {
            c[m][n] = BigRational::new(BigInt::from(m), BigInt::from(n)) * &comp[n][m];
        }
    }
    c
}

pub fn cmp_coeff(m: usize, n: usize, alpha: &BigRational) -> BigRational {
    if n > m {
        return BigRational::zero();
    }
    cmp_table(alpha, m)[m][n].clone()
}

/// `P_0..P_{n_max}` from triangular inversion of `xᵐ = Σ_n C_MP(m,n) P_n(x)`.
pub fn p_polys(alpha: &BigRational, n_max: usize) -> Vec<RatPoly> {
    let c = cmp_table(alpha, n_max);
    let mut p: Vec<RatPoly> = Vec::with_capacity(n_max + 1);
    for m in 0..=n_max {
        let mut r = RatPoly::monomial(m);
        for (n, pn) in p.iter().enumerate() {
            r = &r - &pn.scale(&c[m][n]);
        }
        // The diagonal coefficient is μ_1^m = 1.
        p.push(r.scale(&(BigRational::one() / &c[m][m])));
    }
    p
}

/// `Q_0 = 1`, `Q_1 = x - 1`, `Q_n = (x - 1 - α) Q_{n-1} - α Q_{n-2}`.
pub fn q_polys(alpha: &BigRational, n_max: usize) -> Vec<RatPoly> {
    let one = BigRational::one();
    let mut q = vec![RatPoly::constant(one.clone())];
    if n_max >= 1 {
        q.push(RatPoly::linear(-one.clone(), one.clone()));
    }
    let step = RatPoly::linear(-(&one + alpha), one);
    for n in 2..=n_max {
        let next = &(&step * &q[n - 1]) - &q[n - 2].scale(alpha);
        q.push(next);
    }
    q
}

/// `Q_n(x)` in floating point by the same recurrence.
pub fn q_eval(n: usize, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x - 1.0);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = (x - 1.0 - alpha) * cur - alpha * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `α^{n/2} (U_n(z) + √α U_{n-1}(z))` with `z = (x - 1 - α)/(2√α)`.
pub fn q_chebyshev_form(n: usize, alpha: f64, x: f64) -> f64 {
    let s = alpha.sqrt();
    let z = (x - 1.0 - alpha) / (2.0 * s);
    let um1 = if n == 0 { 0.0 } else { cheb_eval(ChebKind::U, n - 1, z) };
    s.powi(n as i32) * (cheb_eval(ChebKind::U, n, z) + s * um1)
}

/// Largest deviation between the recurrence and the Chebyshev form of `Q_n`
/// on `points` equispaced nodes of `[(1-√α)², (1+√α)²]`, relative to the
/// sup-norm scale `α^{n/2}(n+1)(1+√α)` of the Chebyshev form there.
pub fn q_u_max_error(n: usize, alpha: f64, points: usize) -> f64 {
    let s = alpha.sqrt();
    let (lo, hi) = ((1.0 - s).powi(2), (1.0 + s).powi(2));
    let scale = s.powi(n as i32) * (n + 1) as f64 * (1.0 + s);
    (0..points)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64;
            (q_eval(n, alpha, x) - q_chebyshev_form(n, alpha, x)).abs() / scale
        })
        .fold(0.0, f64::max)
}

/// `U_k(z(x))` with `z = (x - 1 - s²)/(2s)`, as exact polynomials in `x`.
fn shifted_u(s: &BigRational, n_max: usize) -> Vec<RatPoly> {
    let two_s = s * BigRational::from_integer(2.into());
    let z = RatPoly::linear(-(BigRational::one() + s * s) / &two_s, BigRational::one() / &two_s);
    let u: Vec<RatPoly> = (0..=n_max).map(|k| cheb_poly(ChebKind::U, k)).collect();
    u.iter().map(|p| compose(p, &z)).collect()
}

/// `p(q(x))` by Horner's scheme.
pub fn compose(p: &RatPoly, q: &RatPoly) -> RatPoly {
    p.0.iter().rev().fold(RatPoly::zero(), |acc, c| &(&acc * q) + &RatPoly::constant(c.clone()))
}

/// Outcome of the exact `U_n + √α U_{n-1}` versus `Σ P_{n-i}` comparison with `α = s²`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnPnReport {
    /// `α^{n/2}(U_n + √α U_{n-1}) = Σ_{i<n} α^{⌈i/2⌉} P_{n-i}`.
    pub corrected: IdentityReport,
    /// `U_n + √α U_{n-1} = Σ_{i<n} ½ α^{⌊i/2⌋ - n/2} P_{n-i}`, as usually printed.
    pub printed: IdentityReport,
}

pub fn un_pn_identity(s: &BigRational, n_max: usize) -> UnPnReport {
    let alpha = s * s;
    let p = p_polys(&alpha, n_max);
    let u = shifted_u(s, n_max);
    let half = BigRational::new(1.into(), 2.into());
    let mut corrected = IdentityReport::new("un-pn (corrected coefficients)");
    let mut printed = IdentityReport::new("un-pn (printed coefficients)");
    for n in 1..=n_max {
        let lhs = &u[n] + &u[n - 1].scale(s);
        let sn = pow(s, n);
        let mut rhs_c = RatPoly::zero();
        let mut rhs_p = RatPoly::zero();
        for i in 0..n {
            rhs_c = &rhs_c + &p[n - i].scale(&pow(&alpha, i.div_ceil(2)));
            // α^{⌊i/2⌋ - n/2} = s^{2⌊i/2⌋} / s^n.
            let coeff = &half * pow(&alpha, i / 2) / &sn;
            rhs_p = &rhs_p + &p[n - i].scale(&coeff);
        }
        let diff_c = &lhs.scale(&sn) - &rhs_c;
        corrected.record(diff_c.is_zero(), || format!("n={n}: residual {:?}", diff_c.max_abs_coeff().to_string()));
        let diff_p = &lhs - &rhs_p;
        printed.record(diff_p.is_zero(), || format!("n={n}: residual max coeff {}", diff_p.max_abs_coeff()));
    }
    UnPnReport { corrected, printed }
}
