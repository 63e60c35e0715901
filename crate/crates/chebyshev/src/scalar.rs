use crate::poly::{binom, RatPoly};
use crate::report::IdentityReport;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChebKind {
    T,
    U,
}

/// Width of the window around `|x| = 1` where the hyperbolic form replaces
/// the recurrence.
const NEAR_ONE: f64 = 0.05;

/// `T_n(x)` or `U_n(x)`.
///
/// Inside `[-1, 1]` the trigonometric form is used; just outside, the
/// hyperbolic form; further out the three-term recurrence, which is forward
/// stable there.
pub fn cheb_eval(kind: ChebKind, n: usize, x: f64) -> f64 {
    if x < 0.0 {
        let v = cheb_eval(kind, n, -x);
        return if n % 2 == 0 { v } else { -v };
    }
    if x <= 1.0 {
        let th = x.acos();
        return match kind {
            ChebKind::T => (n as f64 * th).cos(),
            ChebKind::U if th == 0.0 => (n + 1) as f64,
            ChebKind::U => ((n + 1) as f64 * th).sin() / th.sin(),
        };
    }
    if x < 1.0 + NEAR_ONE {
        let t = x.acosh();
        return match kind {
            ChebKind::T => (n as f64 * t).cosh(),
            ChebKind::U => ((n + 1) as f64 * t).sinh() / t.sinh(),
        };
    }
    let (mut prev, mut cur) = match kind {
        ChebKind::T => (1.0, x),
        ChebKind::U => (1.0, 2.0 * x),
    };
    if n == 0 {
        return 1.0;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_n` or `U_n` in exact arithmetic by the three-term recurrence.
pub fn cheb_poly(kind: ChebKind, n: usize) -> RatPoly {
    let two_x = RatPoly::linear(BigRational::zero(), BigRational::from_integer(2.into()));
    let mut prev = RatPoly::constant(BigRational::one());
    let mut cur = match kind {
        ChebKind::T => RatPoly::monomial(1),
        ChebKind::U => two_x.clone(),
    };
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients `c_j` of `xᵐ = Σ_j c_j T̃_j(x)` with `T̃_j(x) = 2T_j(x/2)`;
/// the `j = 0` coefficient carries the factor 1/2.
pub fn power_to_t(m: usize) -> Vec<BigRational> {
    let mut c = vec![BigRational::zero(); m + 1];
    for j in (m % 2..=m).step_by(2) {
        let b = BigRational::from_integer(binom(m, (m - j) / 2));
        c[j] = if j == 0 { b / BigRational::from_integer(2.into()) } else { b };
    }
    c
}

/// Power-basis coefficients of `T̃_n(x) = Σ_m (-1)^m (n/(n-m)) C(n-m, m) x^{n-2m}`.
pub fn t_to_power(n: usize) -> RatPoly {
    if n == 0 {
        return RatPoly::constant(BigRational::from_integer(2.into()));
    }
    let mut c = vec![BigRational::zero(); n + 1];
    for m in 0..=n / 2 {
        let v = BigRational::new(BigInt::from(n) * binom(n - m, m), BigInt::from(n - m));
        c[n - 2 * m] = if m % 2 == 0 { v } else { -v };
    }
    RatPoly(c)
}

/// Exact check of `Σ_m (-1)^m (n/(n-m)) C(n-m,m) C(n-2m, (n-2m-j)/2) = δ_{nj}`
/// for `1 ≤ n ≤ n_max` and every `j ≡ n (mod 2)`, `0 ≤ j ≤ n`.
pub fn orthogonality_check(n_max: usize) -> IdentityReport {
    let mut r = IdentityReport::new("orthogonality");
    for n in 1..=n_max {
        for j in (n % 2..=n).step_by(2) {
            let v = orthogonality_sum(n, j);
            r.record(v == if n == j { BigRational::one() } else { BigRational::zero() }, || {
                format!("n={n}, j={j}: {v}")
            });
        }
    }
    r
}

/// The left side of the orthogonality relation, with the `j = 0` halving.
pub fn orthogonality_sum(n: usize, j: usize) -> BigRational {
    let mut s = BigRational::zero();
    for m in 0..=n / 2 {
        let k = n - 2 * m;
        if k < j || (k - j) % 2 != 0 {
            continue;
        }
        let mut term = BigRational::new(BigInt::from(n) * binom(n - m, m) * binom(k, (k - j) / 2), BigInt::from(n - m));
        if j == 0 {
            term /= BigRational::from_integer(2.into());
        }
        if m % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    s
}

/// Coefficients of `Π_j U_{m_j} = Σ_k c_k U_k`, built by iterating
/// `U_k U_l = Σ_{i=0}^{min(k,l)} U_{|l-k|+2i}`.
pub fn product_coeffs(m_list: &[usize]) -> BTreeMap<usize, BigInt> {
    let mut cur = BTreeMap::from([(0usize, BigInt::one())]);
    for &m in m_list {
        let mut next = BTreeMap::new();
        for (&k, c) in &cur {
            for i in 0..=k.min(m) {
                *next.entry(k.abs_diff(m) + 2 * i).or_insert_with(BigInt::zero) += c;
            }
        }
        cur = next;
    }
    cur
}

/// Checks `Σ_k c_k (k+1) = Π_j (m_j + 1)` exactly.
pub fn product_identity_holds(m_list: &[usize]) -> bool {
    let lhs: BigInt = product_coeffs(m_list).iter().map(|(k, c)| c * BigInt::from(k + 1)).sum();
    let rhs: BigInt = m_list.iter().map(|m| BigInt::from(m + 1)).product();
    lhs == rhs
}

/// `sin(t√-y)/(t√-y)` for `y < 0`, continued as `sinh(t√y)/(t√y)` for `y > 0`.
pub fn hard_edge_limit(t: f64, y: f64) -> f64 {
    let s = t * y.abs().sqrt();
    if s < 1e-4 {
        // Two-term series; the next term is below 1e-17.
        let q = s * s / 6.0;
        return if y < 0.0 { 1.0 - q } else { 1.0 + q };
    }
    if y < 0.0 {
        s.sin() / s
    } else {
        s.sinh() / s
    }
}

/// `U_{⌊tM⌋}(1 + y/(2M²)) / (⌊tM⌋ + 1)`, the finite-`M` side of the hard-edge limit.
pub fn hard_edge_finite(t: f64, y: f64, m: usize) -> f64 {
    let mf = m as f64;
    let n = (t * mf).floor() as usize;
    cheb_eval(ChebKind::U, n, 1.0 + y / (2.0 * mf * mf)) / (n + 1) as f64
}

/// The bound `2n ∧ 1/√(-2x)` on `|U_n(1+x)|` for `x ∈ [-1, 0]`.
///
/// It is the small-`x` form of `1/sin θ` and is exceeded by a factor up to
/// `1/√(1+x/2)` on peaks of `|sin((n+1)θ)|`; see [`u_upper_bound_sharp`].
pub fn u_upper_bound(n: usize, x: f64) -> f64 {
    let b = if x < 0.0 { 1.0 / (-2.0 * x).sqrt() } else { f64::INFINITY };
    (2.0 * n as f64).min(b)
}

/// `(n+1) ∧ 1/sin θ` with `cos θ = 1 + x`, which dominates `|U_n(1+x)|` on `[-1, 0]`.
pub fn u_upper_bound_sharp(n: usize, x: f64) -> f64 {
    let s2 = -x * (2.0 + x);
    let b = if s2 > 0.0 { 1.0 / s2.sqrt() } else { f64::INFINITY };
    ((n + 1) as f64).min(b)
}

/// Largest `C` with `U_n(1+x)/(n+1) ≥ e^{C n √x}` over the given grid
/// (`n ≥ 1`, `x ∈ (0, 0.1)`).
pub fn fit_u_lower_constant(ns: &[usize], xs: &[f64]) -> f64 {
    let mut c = f64::INFINITY;
    for &n in ns.iter().filter(|n| **n >= 1) {
        for &x in xs.iter().filter(|x| **x > 0.0 && **x < 0.1) {
            let v = cheb_eval(ChebKind::U, n, 1.0 + x) / (n + 1) as f64;
            c = c.min(v.ln() / (n as f64 * x.sqrt()));
        }
    }
    c
}
