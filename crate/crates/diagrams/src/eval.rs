use crate::diagram::{Diagram, EdgeKind};
use crate::sum::CompensatedSum;
use crate::{DiagramError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Largest `N^{|V|} × Π_e (max w_e)` accepted by the weight-enumerating
/// evaluators.
pub const EVAL_BUDGET: f64 = 1e10;
/// Largest `n_max^{|E|} × N^{|V|}` accepted by the unpruned evaluator.
pub const FORMULA_BUDGET: f64 = 2e8;

/// Matrix powers `P^w` and `A^w` for evaluating diagram functions.
#[derive(Debug, Clone)]
pub struct EvalContext {
    n: usize,
    interior: Vec<DMatrix<Complex64>>,
    open: Option<Vec<DMatrix<Complex64>>>,
}

/// Diagram-function values keyed by the face sums `(Σ_{∂D_j} w_e)_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceTable(pub BTreeMap<Vec<usize>, Complex64>);

impl FaceTable {
    pub fn get(&self, sums: &[usize]) -> Complex64 {
        self.0.get(sums).copied().unwrap_or_default()
    }
}

fn powers(m: &DMatrix<Complex64>, max: usize) -> Vec<DMatrix<Complex64>> {
    let mut out = vec![DMatrix::identity(m.nrows(), m.ncols())];
    for w in 1..=max {
        let next = &out[w - 1] * m;
        out.push(next);
    }
    out
}

impl EvalContext {
    /// `sigma2` must be a symmetric nonnegative matrix and `a` Hermitian of
    /// the same size. Powers are tabulated up to `max_weight`.
    pub fn new(sigma2: &DMatrix<f64>, a: Option<&DMatrix<Complex64>>, max_weight: usize) -> Result<Self> {
        let n = sigma2.nrows();
        if n == 0 || sigma2.ncols() != n {
            return Err(DiagramError::Domain("variance profile must be square and nonempty".into()));
        }
        if sigma2.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(DiagramError::Domain("variance profile entries must be finite and nonnegative".into()));
        }
        if (sigma2 - sigma2.transpose()).amax() > 1e-12 {
            return Err(DiagramError::Domain("variance profile must be symmetric".into()));
        }
        let p = sigma2.map(|v| Complex64::new(v, 0.0));
        let open = match a {
            None => None,
            Some(a) => {
                if a.shape() != (n, n) {
                    return Err(DiagramError::Domain(format!("deformation is {:?}, profile is {n}x{n}", a.shape())));
                }
                let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
                if (a - a.adjoint()).iter().any(|z| z.norm() > 1e-12 * scale) {
                    return Err(DiagramError::Domain("deformation must be Hermitian".into()));
                }
                Some(powers(a, max_weight))
            }
        };
        Ok(EvalContext { n, interior: powers(&p, max_weight), open })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn has_deformation(&self) -> bool {
        self.open.is_some()
    }

    pub fn max_weight(&self) -> usize {
        self.interior.len() - 1
    }

    fn matrix(&self, kind: EdgeKind, w: usize) -> &DMatrix<Complex64> {
        match kind {
            EdgeKind::Interior => &self.interior[w],
            EdgeKind::Open => &self.open.as_ref().expect("checked by caller")[w],
        }
    }

    fn check(&self, d: &Diagram, caps: &[usize]) -> Result<bool> {
        if caps.len() != d.faces.len() {
            return Err(DiagramError::Domain(format!("{} face sums for {} faces", caps.len(), d.faces.len())));
        }
        if let Some(&c) = caps.iter().max() {
            if c > self.max_weight() {
                return Err(DiagramError::Domain(format!("weight {c} exceeds tabulated powers {}", self.max_weight())));
            }
        }
        Ok(!d.has_open() || self.has_deformation())
    }

    fn estimate(&self, d: &Diagram, caps: &[usize], nv: usize) -> f64 {
        let mult = d.multiplicities();
        let per_edge: f64 = mult
            .iter()
            .map(|m| m.iter().zip(caps).filter(|(k, _)| **k > 0).map(|(k, c)| c / k).min().unwrap_or(0).max(1) as f64)
            .product();
        per_edge * (self.n as f64).powi(nv as i32)
    }

    /// `Σ_η Π_e M_e(w_e)[η(tail), η(head)]` by depth-first labeling with
    /// partial products.
    fn label_sum(&self, nv: usize, ends: &[(usize, usize)], kinds: &[EdgeKind], w: &[usize]) -> Complex64 {
        let mut attach = vec![vec![]; nv];
        for (e, &(a, b)) in ends.iter().enumerate() {
            attach[a.max(b)].push(e);
        }
        let mats: Vec<&DMatrix<Complex64>> = kinds.iter().zip(w).map(|(&k, &w)| self.matrix(k, w)).collect();
        let mut eta = vec![0usize; nv];
        fn rec(
            v: usize,
            partial: Complex64,
            n: usize,
            eta: &mut [usize],
            attach: &[Vec<usize>],
            ends: &[(usize, usize)],
            mats: &[&DMatrix<Complex64>],
        ) -> Complex64 {
            if v == eta.len() {
                return partial;
            }
            let mut acc = Complex64::default();
            for x in 0..n {
                eta[v] = x;
                let mut p = partial;
                for &e in &attach[v] {
                    let (a, b) = ends[e];
                    p *= mats[e][(eta[a], eta[b])];
                    if p == Complex64::default() {
                        break;
                    }
                }
                if p != Complex64::default() {
                    acc += rec(v + 1, p, n, eta, attach, ends, mats);
                }
            }
            acc
        }
        rec(0, Complex64::new(1.0, 0.0), self.n, &mut eta, &attach, ends, &mats)
    }

    /// Visits every `w_e ≥ 1` whose face sums stay within `caps`, pruning
    /// with the minimum still needed by later edges.
    fn for_each_weighting(mult: &[Vec<usize>], caps: &[usize], exact: bool, f: &mut dyn FnMut(&[usize], &[usize])) {
        let ne = mult.len();
        let nf = caps.len();
        let mut need = vec![vec![0usize; nf]; ne + 1];
        for e in (0..ne).rev() {
            for j in 0..nf {
                need[e][j] = need[e + 1][j] + mult[e][j];
            }
        }
        if (0..nf).any(|j| need[0][j] > caps[j]) {
            return;
        }
        let mut w = vec![0usize; ne];
        let mut rem = caps.to_vec();
        fn rec(
            e: usize,
            mult: &[Vec<usize>],
            need: &[Vec<usize>],
            caps: &[usize],
            exact: bool,
            w: &mut [usize],
            rem: &mut [usize],
            f: &mut dyn FnMut(&[usize], &[usize]),
        ) {
            if e == w.len() {
                if exact && rem.iter().any(|&r| r != 0) {
                    return;
                }
                let sums: Vec<usize> = caps.iter().zip(rem.iter()).map(|(c, r)| c - r).collect();
                f(w, &sums);
                return;
            }
            let mut wt = 1;
            loop {
                let ok = (0..rem.len()).all(|j| mult[e][j] * wt + need[e + 1][j] <= rem[j]);
                if !ok {
                    break;
                }
                if exact {
                    // An edge confined to faces that nobody later touches must
                    // close those faces exactly.
                    let closes = (0..rem.len()).all(|j| {
                        mult[e][j] == 0 || need[e + 1][j] > 0 || mult[e][j] * wt == rem[j]
                    });
                    if !closes {
                        wt += 1;
                        continue;
                    }
                }
                for j in 0..rem.len() {
                    rem[j] -= mult[e][j] * wt;
                }
                w[e] = wt;
                rec(e + 1, mult, need, caps, exact, w, rem, f);
                for j in 0..rem.len() {
                    rem[j] += mult[e][j] * wt;
                }
                wt += 1;
            }
        }
        rec(0, mult, &need, caps, exact, &mut w, &mut rem, f);
    }

    /// `𝔉_Γ({l_j})`: sum over labelings and over weights with face sums
    /// exactly `l_j`. A trivial face contributes `N` when `l_j = 0`.
    pub fn frak_f(&self, d: &Diagram, ls: &[usize]) -> Result<Complex64> {
        if !self.check(d, ls)? {
            return Ok(Complex64::default());
        }
        let v = d.vertices();
        let est = self.estimate(d, ls, v.count);
        if est > EVAL_BUDGET {
            return Err(budget("diagram function", est, EVAL_BUDGET));
        }
        let mut acc = CompensatedSum::default();
        Self::for_each_weighting(&d.multiplicities(), ls, true, &mut |w, _| {
            acc.add(self.label_sum(v.count, &v.ends, &d.kinds, w));
        });
        Ok(acc.value())
    }

    /// `𝔉_Γ` for every face-sum vector bounded by `caps`, in one pass.
    pub fn face_table(&self, d: &Diagram, caps: &[usize]) -> Result<FaceTable> {
        if !self.check(d, caps)? {
            return Ok(FaceTable(BTreeMap::new()));
        }
        let v = d.vertices();
        let est = self.estimate(d, caps, v.count);
        if est > EVAL_BUDGET {
            return Err(budget("diagram function table", est, EVAL_BUDGET));
        }
        let mut acc: BTreeMap<Vec<usize>, CompensatedSum> = BTreeMap::new();
        Self::for_each_weighting(&d.multiplicities(), caps, false, &mut |w, sums| {
            acc.entry(sums.to_vec()).or_default().add(self.label_sum(v.count, &v.ends, &d.kinds, w));
        });
        Ok(FaceTable(acc.into_iter().map(|(k, s)| (k, s.value())).collect()))
    }

    /// `F_Γ({n_j}) = Σ 𝔉_Γ({m_j})` over `m_j ≡ n_j (mod 2)` with
    /// `1 ≤ m_j ≤ n_j`; a face with `n_j = 0` admits only `m_j = 0`.
    pub fn f_gamma(&self, d: &Diagram, ns: &[usize]) -> Result<Complex64> {
        let table = self.face_table(d, ns)?;
        let mut acc = CompensatedSum::default();
        for (sums, val) in &table.0 {
            if admissible(sums, ns) {
                acc.add(*val);
            }
        }
        Ok(acc.value())
    }

    /// `F_Γ` straight from its defining sum: every `w_e ∈ [1, max n_j]` and
    /// every labeling, keeping weightings with `2t_j + Σ_{∂D_j} w_e = n_j`
    /// for some `t_j ≥ 0`.
    pub fn f_gamma_formula(&self, d: &Diagram, ns: &[usize]) -> Result<Complex64> {
        if !self.check(d, ns)? {
            return Ok(Complex64::default());
        }
        let v = d.vertices();
        let ne = d.n_edges();
        let top = ns.iter().copied().max().unwrap_or(0);
        let est = (top.max(1) as f64).powi(ne as i32) * (self.n as f64).powi(v.count as i32);
        if est > FORMULA_BUDGET {
            return Err(budget("unpruned diagram function", est, FORMULA_BUDGET));
        }
        if ne > 0 && top == 0 {
            return Ok(Complex64::default());
        }
        let mut acc = CompensatedSum::default();
        let mut w = vec![1usize; ne];
        let mut eta = vec![0usize; v.count];
        loop {
            let sums: Vec<usize> = d.faces.iter().map(|f| f.iter().map(|s| w[s.edge]).sum()).collect();
            if admissible(&sums, ns) {
                let mats: Vec<&DMatrix<Complex64>> = d.kinds.iter().zip(&w).map(|(&k, &w)| self.matrix(k, w)).collect();
                eta.iter_mut().for_each(|x| *x = 0);
                loop {
                    let mut p = Complex64::new(1.0, 0.0);
                    for (e, &(a, b)) in v.ends.iter().enumerate() {
                        p *= mats[e][(eta[a], eta[b])];
                    }
                    acc.add(p);
                    if !odometer(&mut eta, 0, self.n - 1) {
                        break;
                    }
                }
            }
            if !odometer(&mut w, 1, top) {
                break;
            }
        }
        Ok(acc.value())
    }

    /// Both `F_Γ` paths, failing when they differ by more than `tol`
    /// relative to `max(1, |F|)`.
    pub fn f_gamma_checked(&self, d: &Diagram, ns: &[usize], tol: f64) -> Result<Complex64> {
        let a = self.f_gamma(d, ns)?;
        let b = self.f_gamma_formula(d, ns)?;
        let diff = (a - b).norm();
        if diff > tol * a.norm().max(1.0) {
            return Err(DiagramError::Mismatch(format!("{} at {ns:?}: {a} vs {b}", d.code())));
        }
        Ok(a)
    }
}

fn budget(what: &str, estimate: f64, limit: f64) -> DiagramError {
    DiagramError::Budget { what: what.into(), estimate, limit }
}

fn admissible(sums: &[usize], ns: &[usize]) -> bool {
    sums.iter().zip(ns).all(|(&s, &n)| if n == 0 { s == 0 } else { s >= 1 && s <= n && (n - s) % 2 == 0 })
}

/// Advances a digit vector over `[lo, hi]`; false once it wraps around.
fn odometer(digits: &mut [usize], lo: usize, hi: usize) -> bool {
    for d in digits.iter_mut() {
        if *d < hi {
            *d += 1;
            return true;
        }
        *d = lo;
    }
    false
}

/// Upper envelope for a connected diagram without open edges:
/// `n^{|V|−1}/(|V|−1)! · (max(γ t_N, n)/N)^{|E|−|V|+1} · N`.
pub fn envelope_bound(d: &Diagram, n: usize, dim: usize, gamma: f64, t_n: usize) -> f64 {
    let v = d.vertices().count as i32;
    let e = d.n_edges() as i32;
    let fact: f64 = (1..v).map(|i| i as f64).product();
    let n = n as f64;
    let ratio = (gamma * t_n as f64).max(n) / dim as f64;
    n.powi(v - 1) / fact * ratio.powi(e - v + 1) * dim as f64
}
