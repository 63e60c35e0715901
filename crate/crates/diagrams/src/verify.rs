use crate::contract::okounkov_contract;
use crate::corrections::{b_prime, catalan_correction};
use crate::diagram::Diagram;
use crate::eval::{envelope_bound, EvalContext};
use crate::gluing::enumerate_gluings;
use crate::ribbon::glue;
use crate::sum::CompensatedSum;
use crate::wick::wick_moment;
use crate::{DiagramError, Result};
use irm_chebyshev::{cheb_poly, ChebKind};
use irm_ensembles::Beta;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Absolute tolerance for the exact expansions evaluated in floating point.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Corrected power moments against `Σ 𝔉_Γ` with binomial weights.
    Ribbon,
    /// Second-kind Chebyshev moments against `Σ F_Γ`.
    Chebyshev,
    /// Corrected first-kind Chebyshev moments against `Σ 𝔉_Γ`.
    ChebyshevT,
    /// Joint cumulants against connected diagrams.
    Cumulant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramContribution {
    pub code: String,
    pub connected: bool,
    /// How many gluings contract to this diagram.
    pub multiplicity: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCheck {
    pub model: Model,
    pub orders: Vec<usize>,
    pub beta: u8,
    pub dim: usize,
    pub deformed: bool,
    /// Wick-oracle side.
    pub lhs: f64,
    /// Diagram side.
    pub rhs: f64,
    pub abs_err: f64,
    pub passed: bool,
    pub gluings: usize,
    pub contributions: Vec<DiagramContribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<ExpansionCheck>,
    pub passed: bool,
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().expect("finite rational")
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn nonzero(a: Option<&DMatrix<Complex64>>) -> Option<&DMatrix<Complex64>> {
    a.filter(|a| a.iter().any(|z| *z != Complex64::default()))
}

/// Distinct diagrams produced by all gluings of the given perimeters, with
/// the number of gluings behind each. Contraction invariants (Euler
/// characteristic, weight conservation, degree bounds) are checked on every
/// gluing.
pub fn diagram_set(perimeters: &[usize], beta: Beta, allow_open: bool) -> Result<(BTreeMap<Diagram, usize>, usize)> {
    let mut out = BTreeMap::new();
    let mut count = 0;
    for g in enumerate_gluings(perimeters, beta, allow_open)? {
        let r = glue(&g)?;
        let c = okounkov_contract(&r);
        let d = &c.diagram;
        if d.euler_characteristic() != c.euler_before {
            return Err(DiagramError::Mismatch(format!("Euler characteristic changed for {g:?}")));
        }
        let fw = c.face_weights();
        if (0..perimeters.len()).any(|j| fw[j] + c.tree_steps[j] != perimeters[j]) || !d.satisfies_degree_bounds() {
            return Err(DiagramError::Mismatch(format!("contraction invariant broken for {g:?}")));
        }
        *out.entry(c.diagram).or_insert(0) += 1;
        count += 1;
    }
    Ok((out, count))
}

/// `(coefficient of x^m in U_n(x/2))` for `m = 0..=n`.
fn u_half_coeffs(n: usize) -> Vec<f64> {
    let p = cheb_poly(ChebKind::U, n);
    (0..=n).map(|m| to_f64(&p.coeff(m)) / 2f64.powi(m as i32)).collect()
}

/// `(coefficient of x^m in 2T_n(x/2))` for `m = 0..=n`.
fn t_tilde_coeffs(n: usize) -> Vec<f64> {
    let p = cheb_poly(ChebKind::T, n);
    (0..=n).map(|m| 2.0 * to_f64(&p.coeff(m)) / 2f64.powi(m as i32)).collect()
}

/// `E Π_j Tr p_j(X)` for polynomials given by coefficient lists, expanded
/// into power moments and evaluated with the Wick oracle.
fn polynomial_moment(
    coeffs: &[Vec<f64>],
    sigma2: &DMatrix<f64>,
    a: Option<&DMatrix<Complex64>>,
    beta: Beta,
) -> Result<Complex64> {
    let s = coeffs.len();
    let mut acc = CompensatedSum::default();
    let mut ms = vec![0usize; s];
    loop {
        let c: f64 = ms.iter().zip(coeffs).map(|(&m, cs)| cs[m]).product();
        if c != 0.0 {
            acc.add(wick_moment(&ms, sigma2, a, beta)? * c);
        }
        let mut j = 0;
        loop {
            if j == s {
                return Ok(acc.value());
            }
            if ms[j] + 1 < coeffs[j].len() {
                ms[j] += 1;
                break;
            }
            ms[j] = 0;
            j += 1;
        }
    }
}

/// `E Π_j Tr U_{n_j}(X/2)` through the Wick oracle.
pub fn chebyshev_moment(ns: &[usize], sigma2: &DMatrix<f64>, a: Option<&DMatrix<Complex64>>, beta: Beta) -> Result<Complex64> {
    let coeffs: Vec<Vec<f64>> = ns.iter().map(|&n| u_half_coeffs(n)).collect();
    polynomial_moment(&coeffs, sigma2, a, beta)
}

fn finish(
    model: Model,
    orders: &[usize],
    beta: Beta,
    dim: usize,
    deformed: bool,
    lhs: Complex64,
    rhs: Complex64,
    gluings: usize,
    contributions: Vec<DiagramContribution>,
) -> ExpansionCheck {
    let abs_err = (lhs - rhs).norm();
    ExpansionCheck {
        model,
        orders: orders.to_vec(),
        beta: beta.into(),
        dim,
        deformed,
        lhs: lhs.re,
        rhs: rhs.re,
        abs_err,
        passed: abs_err <= TOLERANCE,
        gluings,
        contributions,
    }
}

fn sum_over_diagrams(
    set: &BTreeMap<Diagram, usize>,
    mut value: impl FnMut(&Diagram) -> Result<Complex64>,
    keep: impl Fn(&Diagram) -> bool,
) -> Result<(Complex64, Vec<DiagramContribution>)> {
    let mut acc = CompensatedSum::default();
    let mut contributions = vec![];
    for (d, &mult) in set {
        if !keep(d) {
            continue;
        }
        let v = value(d)?;
        acc.add(v);
        contributions.push(DiagramContribution { code: d.code(), connected: d.is_connected(), multiplicity: mult, value: v.re });
    }
    Ok((acc.value(), contributions))
}

/// `E Π_j (Tr X^{m_j} + b_{m_j} N)` against
/// `Σ'_{l} Π_j binom(m_j, (m_j − l_j)/2) Σ_Γ 𝔉_Γ({l_j})`, where the binomial
/// is halved when `l_j = 0`.
pub fn verify_ribbon(ms: &[usize], sigma2: &DMatrix<f64>, a: Option<&DMatrix<Complex64>>, beta: Beta) -> Result<ExpansionCheck> {
    let a = nonzero(a);
    let n = sigma2.nrows();
    let ctx = EvalContext::new(sigma2, a, ms.iter().copied().max().unwrap_or(0))?;
    let (set, gluings) = diagram_set(ms, beta, a.is_some())?;
    let s = ms.len();
    let coef = |m: usize, l: usize| if l == 0 { 0.5 * binom(m, m / 2) } else { binom(m, (m - l) / 2) };
    let (rhs, contributions) = sum_over_diagrams(
        &set,
        |d| {
            let table = ctx.face_table(d, ms)?;
            let mut acc = CompensatedSum::default();
            for (ls, v) in &table.0 {
                if ls.iter().zip(ms).all(|(&l, &m)| l % 2 == m % 2) {
                    let c: f64 = ls.iter().zip(ms).map(|(&l, &m)| coef(m, l)).product();
                    acc.add(*v * c);
                }
            }
            Ok(acc.value())
        },
        |_| true,
    )?;
    let mut lhs = CompensatedSum::default();
    for mask in 0..1usize << s {
        let mut c = 1.0;
        let mut rest = vec![];
        for (j, &m) in ms.iter().enumerate() {
            if mask >> j & 1 == 1 {
                c *= to_f64(&catalan_correction(m)) * n as f64;
            } else {
                rest.push(m);
            }
        }
        if c != 0.0 {
            let w = if rest.is_empty() { Complex64::new(1.0, 0.0) } else { wick_moment(&rest, sigma2, a, beta)? };
            lhs.add(w * c);
        }
    }
    Ok(finish(Model::Ribbon, ms, beta, n, a.is_some(), lhs.value(), rhs, gluings, contributions))
}

/// `E Π_j Tr U_{n_j}(X/2)` against `Σ_Γ F_Γ({n_j})`.
pub fn verify_chebyshev(ns: &[usize], sigma2: &DMatrix<f64>, a: Option<&DMatrix<Complex64>>, beta: Beta) -> Result<ExpansionCheck> {
    let a = nonzero(a);
    let ctx = EvalContext::new(sigma2, a, ns.iter().copied().max().unwrap_or(0))?;
    let (set, gluings) = diagram_set(ns, beta, a.is_some())?;
    let (rhs, contributions) = sum_over_diagrams(&set, |d| ctx.f_gamma(d, ns), |_| true)?;
    let lhs = chebyshev_moment(ns, sigma2, a, beta)?;
    Ok(finish(Model::Chebyshev, ns, beta, sigma2.nrows(), a.is_some(), lhs, rhs, gluings, contributions))
}

/// `E Π_j Tr (T̃_{n_j}(X) + b'_{n_j})` against `Σ_Γ 𝔉_Γ({n_j})`, with
/// `T̃_n(x) = 2T_n(x/2)`. The identity needs every `n_j ≥ 1`; at `n_j = 0`
/// the left side has `1.5N` where the trivial diagram gives `N`.
pub fn verify_chebyshev_t(ns: &[usize], sigma2: &DMatrix<f64>, a: Option<&DMatrix<Complex64>>, beta: Beta) -> Result<ExpansionCheck> {
    let a = nonzero(a);
    let ctx = EvalContext::new(sigma2, a, ns.iter().copied().max().unwrap_or(0))?;
    let (set, gluings) = diagram_set(ns, beta, a.is_some())?;
    let (rhs, contributions) = sum_over_diagrams(&set, |d| ctx.frak_f(d, ns), |_| true)?;
    let coeffs: Vec<Vec<f64>> = ns
        .iter()
        .map(|&m| {
            let mut c = t_tilde_coeffs(m);
            c[0] += to_f64(&b_prime(m));
            c
        })
        .collect();
    // The constant term `b'` multiplies Tr I = N, which the polynomial
    // expansion already produces through Tr X^0.
    let lhs = polynomial_moment(&coeffs, sigma2, a, beta)?;
    Ok(finish(Model::ChebyshevT, ns, beta, sigma2.nrows(), a.is_some(), lhs, rhs, gluings, contributions))
}

fn set_partitions(s: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for i in 0..s {
        let mut next = vec![];
        for p in out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(i);
                next.push(q);
            }
            let mut q = p;
            q.push(vec![i]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Joint cumulant of `Tr U_{n_j}(X/2)` from moments against the sum of
/// `F_Γ` over connected diagrams.
pub fn verify_cumulant(ns: &[usize], sigma2: &DMatrix<f64>, a: Option<&DMatrix<Complex64>>, beta: Beta) -> Result<ExpansionCheck> {
    let a = nonzero(a);
    let s = ns.len();
    let ctx = EvalContext::new(sigma2, a, ns.iter().copied().max().unwrap_or(0))?;
    let (set, gluings) = diagram_set(ns, beta, a.is_some())?;
    let (rhs, contributions) = sum_over_diagrams(&set, |d| ctx.f_gamma(d, ns), Diagram::is_connected)?;
    let mut moments: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
    let mut kappa = CompensatedSum::default();
    for p in set_partitions(s) {
        let k = p.len();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let fact: f64 = (1..k).map(|i| i as f64).product();
        let mut term = Complex64::new(sign * fact, 0.0);
        for block in &p {
            let m = match moments.get(block) {
                Some(m) => *m,
                None => {
                    let sub: Vec<usize> = block.iter().map(|&j| ns[j]).collect();
                    let m = chebyshev_moment(&sub, sigma2, a, beta)?;
                    moments.insert(block.clone(), m);
                    m
                }
            };
            term *= m;
        }
        kappa.add(term);
    }
    Ok(finish(Model::Cumulant, ns, beta, sigma2.nrows(), a.is_some(), kappa.value(), rhs, gluings, contributions))
}

/// Runs the power, second-kind Chebyshev and cumulant expansions for one
/// set of orders.
pub fn verify_expansions(
    orders: &[usize],
    sigma2: &DMatrix<f64>,
    a: Option<&DMatrix<Complex64>>,
    beta: Beta,
) -> Result<VerificationReport> {
    let checks = vec![
        verify_ribbon(orders, sigma2, a, beta)?,
        verify_chebyshev(orders, sigma2, a, beta)?,
        verify_cumulant(orders, sigma2, a, beta)?,
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport { checks, passed })
}

/// Result of comparing `|F_Γ|` against [`envelope_bound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub cases: usize,
    pub violations: usize,
    /// Largest `|F_Γ| / bound` seen.
    pub worst_ratio: f64,
}

/// Checks the envelope on every connected diagram without open edges that
/// the gluings of `ns` produce, with the profile's mixing constants.
pub fn envelope_check(ns: &[usize], sigma2: &DMatrix<f64>, beta: Beta, gamma: f64, t_n: usize) -> Result<EnvelopeReport> {
    let ctx = EvalContext::new(sigma2, None, ns.iter().copied().max().unwrap_or(0))?;
    let (set, _) = diagram_set(ns, beta, false)?;
    let total: usize = ns.iter().sum();
    let mut report = EnvelopeReport { cases: 0, violations: 0, worst_ratio: 0.0 };
    for d in set.keys().filter(|d| d.is_connected() && !d.is_trivial()) {
        let f = ctx.f_gamma(d, ns)?.norm();
        let bound = envelope_bound(d, total, sigma2.nrows(), gamma, t_n);
        report.cases += 1;
        if f > bound * (1.0 + 1e-12) {
            report.violations += 1;
        }
        if !bound.is_zero() {
            report.worst_ratio = report.worst_ratio.max(f / bound);
        }
    }
    Ok(report)
}
