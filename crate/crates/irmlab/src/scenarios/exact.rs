use super::{positive, to_value, Body};
use crate::config::ExperimentConfig;
use crate::report::{Budget, Check};
use crate::{CliError, Result};
use irm_diagrams::{diagram_set, gluing_count, verify_chebyshev, verify_cumulant, verify_ribbon, EvalContext, TOLERANCE};
use irm_edgestats::derive_seed;
use irm_ensembles::{assemble_with_sigma, sample_noise, sample_rect_noise, Beta, EntryLaw, Matrix};
use irm_nonbacktracking::{verify_wigner_path_expansion, verify_wishart_path_expansion, CMatrix, PATH_TOLERANCE};
use irm_profiles::{generalized_wigner_profile, wishart_profile, WishartBuilder};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

/// Agreement required between the two evaluation routes of `F_Γ`.
pub const DUAL_TOLERANCE: f64 = 1e-10;

fn betas() -> [Beta; 2] {
    [Beta::Real, Beta::Complex]
}

/// Flat profile `1/N`.
pub fn uniform_sigma(n: usize) -> DMatrix<f64> {
    DMatrix::from_element(n, n, 1.0 / n as f64)
}

/// Doubly stochastic profile with weight 1/2 on the diagonal.
pub fn lazy_sigma(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.5 } else { 0.5 / (n - 1) as f64 })
}

/// Rank-one deformation `τ vv*` along a fixed non-coordinate direction,
/// genuinely complex when `β = 2`.
pub fn fixed_spike(n: usize, beta: Beta, tau: f64) -> DMatrix<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|i| match beta {
            Beta::Real => Complex64::new(0.4 + 0.15 * i as f64, 0.0),
            Beta::Complex => Complex64::new(0.4 + 0.15 * i as f64, 0.1 * i as f64),
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj() * tau)
}

fn profile_named(name: &str, n: usize) -> DMatrix<f64> {
    if name == "lazy" {
        lazy_sigma(n)
    } else {
        uniform_sigma(n)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramsPlan {
    pub dims: Vec<usize>,
    pub profiles: Vec<&'static str>,
    pub spike_tau: f64,
    pub single_orders: Vec<usize>,
    pub pair_orders: Vec<[usize; 2]>,
    pub cumulant_dim: usize,
    pub cumulant_orders: Vec<[usize; 2]>,
    pub instances: usize,
    pub seed: u64,
}

impl DiagramsPlan {
    pub fn resolve(config: &ExperimentConfig) -> Result<Self> {
        let p = &config.params;
        let n = p.n.unwrap_or(4);
        if n < 2 {
            return Err(CliError::Config(format!("diagrams-exact needs n ≥ 2, got {n}")));
        }
        let max_order = p.max_order.unwrap_or(8);
        Ok(DiagramsPlan {
            dims: (2..=n).collect(),
            profiles: vec!["uniform", "lazy"],
            spike_tau: 0.9,
            single_orders: (0..=max_order).collect(),
            pair_orders: vec![[2, 2], [2, 4], [3, 3]],
            cumulant_dim: n.min(3),
            cumulant_orders: vec![[2, 2], [3, 3]],
            instances: p.instances.unwrap_or(50),
            seed: config.seed,
        })
    }

    fn shapes(&self) -> Vec<Vec<usize>> {
        self.single_orders.iter().map(|&m| vec![m]).chain(self.pair_orders.iter().map(|p| p.to_vec())).collect()
    }

    pub fn budget(&self) -> Budget {
        let mut estimate = 0.0;
        for &n in &self.dims {
            for shape in self.shapes() {
                let k: usize = shape.iter().sum();
                for beta in betas() {
                    estimate += 8.0 * ((n as f64).powi(k as i32) * k.max(1) as f64 + gluing_count(&shape, beta, true));
                }
            }
        }
        Budget { unit: "index paths plus gluings".into(), estimate, limit: 1e10 }
    }

    pub fn criteria(&self) -> Value {
        json!({
            "ribbon": "corrected power moments (Wick oracle) equal Σ binomial weights × 𝔉_Γ",
            "chebyshev": "E Π Tr U_{n_j}(X/2) (Wick oracle) equals Σ F_Γ",
            "cumulant": "joint cumulants equal the connected-diagram sum",
            "tolerance": TOLERANCE,
            "dual_route_tolerance": DUAL_TOLERANCE,
        })
    }

    pub(crate) fn run(&self) -> Result<Body> {
        let mut checks = vec![];
        let mut record = |kind: &str, label: String, c: irm_diagrams::ExpansionCheck| {
            let detail = json!({ "lhs": c.lhs, "rhs": c.rhs, "gluings": c.gluings, "diagrams": c.contributions.len() });
            checks.push(Check::new(format!("{kind} {label}"), c.passed, c.abs_err, TOLERANCE).with(detail));
        };
        for &n in &self.dims {
            for &prof in &self.profiles {
                let s2 = profile_named(prof, n);
                for beta in betas() {
                    let spike = fixed_spike(n, beta, self.spike_tau);
                    for a in [None, Some(&spike)] {
                        let tag = |orders: &[usize]| {
                            format!("β={} N={n} {prof} A={} orders={orders:?}", u8::from(beta), if a.is_some() { "spike" } else { "0" })
                        };
                        for shape in self.shapes() {
                            if !shape.contains(&0) {
                                record("ribbon", tag(&shape), verify_ribbon(&shape, &s2, a, beta)?);
                            }
                            record("chebyshev", tag(&shape), verify_chebyshev(&shape, &s2, a, beta)?);
                        }
                        if n == self.cumulant_dim {
                            for o in &self.cumulant_orders {
                                record("cumulant", tag(o), verify_cumulant(o, &s2, a, beta)?);
                            }
                        }
                    }
                }
            }
        }
        checks.extend(self.dual_routes()?);
        Ok(Body::new(checks))
    }

    /// `F_Γ` by the pruned enumerator and by its unpruned defining sum on
    /// random diagrams, profiles and orders.
    fn dual_routes(&self) -> Result<Vec<Check>> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, 40));
        let mut pool = vec![];
        for (p, beta) in [(vec![6], Beta::Real), (vec![3, 3], Beta::Complex), (vec![2, 4], Beta::Real), (vec![5], Beta::Complex)] {
            let (set, _) = diagram_set(&p, beta, true)?;
            pool.extend(set.into_keys().map(|d| (d, p.clone(), beta)));
        }
        let max_dim = *self.dims.last().unwrap_or(&2);
        let mut checks = vec![];
        for i in 0..self.instances {
            let (d, p, beta) = &pool[rng.random_range(0..pool.len())];
            let n = rng.random_range(2..=max_dim.min(4));
            let prof = if rng.random_bool(0.5) { "uniform" } else { "lazy" };
            let a = fixed_spike(n, *beta, rng.random_range(0.2..1.2));
            let ns: Vec<usize> = p.iter().map(|&m| m + 2 * rng.random_range(0..2usize)).collect();
            let ctx = EvalContext::new(&profile_named(prof, n), Some(&a), 8)?;
            let x = ctx.f_gamma(d, &ns)?;
            let y = ctx.f_gamma_formula(d, &ns)?;
            let err = (x - y).norm() / x.norm().max(1.0);
            let name = format!("F dual routes {i}: {} N={n} {prof} orders={ns:?}", d.code());
            checks.push(Check::new(name, err <= DUAL_TOLERANCE, err, DUAL_TOLERANCE).with(json!({ "pruned": [x.re, x.im], "formula": [y.re, y.im] })));
        }
        Ok(checks)
    }
}

fn unit_vector(n: usize, beta: Beta, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| match beta {
            Beta::Real => Complex64::new(rng.random_range(-1.0..1.0), 0.0),
            Beta::Complex => Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Hermitian `H = √σ² ∘ W` with Gaussian `W`.
pub fn sample_wigner_h(sigma2: &DMatrix<f64>, beta: Beta, seed: u64) -> Result<CMatrix> {
    let w = sample_noise(sigma2.nrows(), EntryLaw::Gaussian, beta, seed, 0)?;
    Ok(assemble_with_sigma(&sigma2.map(f64::sqrt), &w, None)?.to_complex())
}

/// Rectangular `H = √σ² ∘ W` with Gaussian `W`.
pub fn sample_wishart_h(sigma2: &DMatrix<f64>, beta: Beta, seed: u64) -> Result<CMatrix> {
    let (m, n) = sigma2.shape();
    Ok(match sample_rect_noise(m, n, EntryLaw::Gaussian, beta, seed, 0)? {
        Matrix::Real(w) => w.component_mul(&sigma2.map(f64::sqrt)).map(|v| Complex64::new(v, 0.0)),
        Matrix::Complex(w) => w.component_mul(&sigma2.map(|v| Complex64::new(v.sqrt(), 0.0))),
    })
}

/// Random rank-one `τ uv*` of the given shape.
pub fn rank_one(m: usize, n: usize, beta: Beta, tau: f64, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = unit_vector(m, beta, &mut rng);
    let w = if m == n { u.clone() } else { unit_vector(n, beta, &mut rng) };
    CMatrix::from_fn(m, n, |i, j| u[i] * w[j].conj() * tau)
}

#[derive(Debug, Clone, Serialize)]
pub struct NbCase {
    pub model: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub order: usize,
    pub beta: u8,
    pub spike: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NbpathPlan {
    pub cases: Vec<NbCase>,
}

fn beta_by(i: u64) -> Beta {
    if i % 2 == 0 {
        Beta::Real
    } else {
        Beta::Complex
    }
}

impl NbpathPlan {
    pub fn resolve(config: &ExperimentConfig) -> Result<Self> {
        let p = &config.params;
        let seeds = positive("seeds", p.seeds.unwrap_or(100))? as u64;
        let n_max = p.n.unwrap_or(8);
        if n_max < 2 {
            return Err(CliError::Config(format!("nbpath-exact needs n ≥ 2, got {n_max}")));
        }
        let order_max = p.max_order.unwrap_or(10);
        let (w_max, w_order) = (n_max.min(6) as u64, (order_max / 2) as u64);
        let mut cases = vec![];
        for s in 0..seeds {
            let seed = derive_seed(config.seed, 1000 + s);
            let beta = beta_by(s / 2);
            cases.push(NbCase {
                model: "wigner",
                rows: 2 + (s % (n_max as u64 - 1)) as usize,
                cols: 0,
                order: (s % (order_max as u64 + 1)) as usize,
                beta: beta.into(),
                spike: (s % 3 != 0).then(|| 1.0 + 0.1 * (s % 5) as f64),
                seed,
            });
            let cols = 1 + s % w_max;
            cases.push(NbCase {
                model: "wishart",
                rows: (1 + s / w_max % cols) as usize,
                cols: cols as usize,
                order: (s % (w_order + 1)) as usize,
                beta: beta_by(s / 3).into(),
                spike: (s % 3 != 1).then_some(0.9),
                seed,
            });
        }
        for c in cases.iter_mut() {
            if c.model == "wigner" {
                c.cols = c.rows;
            }
        }
        Ok(NbpathPlan { cases })
    }

    pub fn budget(&self) -> Budget {
        let estimate = self
            .cases
            .iter()
            .map(|c| {
                let (total, dim) = if c.model == "wigner" { (c.order, c.rows) } else { (2 * c.order, c.rows + c.cols) };
                8.0 * ((total + 1) as f64).powi(2) * (dim as f64).powi(3)
            })
            .sum();
        Budget { unit: "matrix-product flops".into(), estimate, limit: irm_nonbacktracking::EXPANSION_BUDGET }
    }

    pub fn criteria(&self) -> Value {
        json!({
            "wigner": "U_n((H+A)/2) equals the non-backtracking path sum",
            "wishart": "𝒬_n((H+A)(H+A)*) equals the [M]×[M] block of the bipartite path sum at length 2n",
            "tolerance": PATH_TOLERANCE,
        })
    }

    pub(crate) fn run(&self) -> Result<Body> {
        let mut checks = vec![];
        for c in &self.cases {
            let beta = Beta::try_from(c.beta).map_err(CliError::Config)?;
            let r = if c.model == "wigner" {
                let s2 = generalized_wigner_profile(c.rows, 0.4, 3.0, c.seed)?.dense();
                let h = sample_wigner_h(&s2, beta, c.seed)?;
                let a = c.spike.map(|t| rank_one(c.rows, c.rows, beta, t, c.seed ^ 0xa));
                verify_wigner_path_expansion(&h, a.as_ref(), &s2, c.order)?
            } else {
                let builder = if c.seed % 2 == 0 { WishartBuilder::Uniform } else { WishartBuilder::Banded { width: 0.3 } };
                let prof = wishart_profile(c.rows, c.cols, builder)?;
                let s2 = prof.dense();
                let h = sample_wishart_h(&s2, beta, c.seed)?;
                let a = c.spike.map(|t| rank_one(c.rows, c.cols, beta, t, c.seed ^ 0xb));
                verify_wishart_path_expansion(&h, a.as_ref(), &s2, c.order, prof.alpha())?
            };
            let name = format!(
                "{} M={} N={} n={} β={} A={}",
                c.model,
                c.rows,
                c.cols,
                c.order,
                c.beta,
                c.spike.map_or("0".to_string(), |t| format!("{t}"))
            );
            checks.push(Check::new(name, r.passed, r.residual, PATH_TOLERANCE).with(to_value(&r)));
        }
        Ok(Body::new(checks))
    }
}
