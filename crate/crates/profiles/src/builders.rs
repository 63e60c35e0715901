use crate::profile::Torus;
use crate::{BandDensity, ProfileError, Result, VarianceProfile};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub const SINKHORN_TOL: f64 = 1e-12;
pub const SINKHORN_MAX_ITER: usize = 10_000;

/// Mean-field profile `σ²_ij = 1/N`.
pub fn uniform_profile(n: usize) -> Result<VarianceProfile> {
    if n == 0 {
        return Err(ProfileError::Domain("N must be positive".into()));
    }
    VarianceProfile::square(DMatrix::from_element(n, n, 1.0 / n as f64), "uniform")
}

fn check_band_args(d: usize, l: usize, w: f64) -> Result<()> {
    if d == 0 || l < 2 || !(w >= 1.0 && w.is_finite()) {
        return Err(ProfileError::Domain(format!(
            "band profile needs d >= 1, L >= 2 and finite W >= 1 (d={d}, L={l}, W={w})"
        )));
    }
    l.checked_pow(d as u32)
        .filter(|n| *n <= 1 << 24)
        .map(|_| ())
        .ok_or_else(|| ProfileError::Domain(format!("lattice with L={l}, d={d} exceeds the memory budget")))
}

/// Periodized kernel on the torus, unnormalized, indexed by flattened site.
fn periodized(d: usize, l: usize, w: f64, f: &dyn Fn(f64) -> f64, radius: Option<f64>) -> Vec<f64> {
    let n = l.pow(d as u32);
    // Number of periodic images per coordinate.
    let k = match radius {
        Some(r) => ((r * w) / l as f64).ceil() as i64 + 1,
        None => match d {
            1 => 4096,
            2 => 64,
            _ => 8,
        },
    };
    let images: Vec<i64> = (-k..=k).collect();
    let mut out = vec![0.0; n];
    let mut idx = vec![0usize; d];
    for (x, slot) in out.iter_mut().enumerate() {
        let base: Vec<i64> = (0..d)
            .map(|c| {
                // Centered representative keeps the truncated image sum even.
                let v = ((x / l.pow((d - 1 - c) as u32)) % l) as i64;
                if 2 * v > l as i64 { v - l as i64 } else { v }
            })
            .collect();
        // Sum over the image lattice in odometer order.
        idx.iter_mut().for_each(|v| *v = 0);
        let mut acc = 0.0;
        loop {
            let mut r2 = 0.0;
            for c in 0..d {
                let z = (base[c] + images[idx[c]] * l as i64) as f64 / w;
                r2 += z * z;
            }
            acc += f(r2);
            let mut c = 0;
            while c < d {
                idx[c] += 1;
                if idx[c] < images.len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
            if c == d {
                break;
            }
        }
        *slot = acc;
    }
    out
}

/// Band profile `σ²_xy = M⁻¹ Σ_n f((x - y + nL)/W)` on `(Z/LZ)^d`, stored
/// in circulant form.
pub fn band_profile(d: usize, l: usize, w: f64, f: BandDensity) -> Result<VarianceProfile> {
    check_band_args(d, l, w)?;
    f.check()?;
    let eval = move |r2: f64| f.eval_sq(d, r2);
    let mut row = periodized(d, l, w, &eval, f.support_radius());
    let m: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= m);
    let torus = Torus { dimension: d, side: l, bandwidth: w, density: Some(f) };
    VarianceProfile::circulant(torus, row, "band")
}

/// Band profile with a user-supplied density `f(x)`; `f` must be even.
pub fn band_profile_custom(d: usize, l: usize, w: f64, f: &dyn Fn(&[f64]) -> f64) -> Result<VarianceProfile> {
    check_band_args(d, l, w)?;
    // Probe evenness at random points.
    let mut rng = ChaCha20Rng::seed_from_u64(0x0e7e);
    for _ in 0..256 {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-4.0..4.0)).collect();
        let mx: Vec<f64> = x.iter().map(|v| -v).collect();
        let (a, b) = (f(&x), f(&mx));
        if !(a >= 0.0) || (a - b).abs() > 1e-12 * (1.0 + a.abs()) {
            return Err(ProfileError::Domain("custom band density must be even and nonnegative".into()));
        }
    }
    let n = l.pow(d as u32);
    let torus = Torus { dimension: d, side: l, bandwidth: w, density: None };
    let mut row = vec![0.0; n];
    let k = 8i64;
    for (x, slot) in row.iter_mut().enumerate() {
        let c = torus.centered_coords(x);
        let mut acc = 0.0;
        let total = (2 * k + 1).pow(d as u32);
        for mut t in 0..total {
            let mut z = vec![0.0; d];
            for zc in z.iter_mut().zip(c.iter()) {
                let img = (t % (2 * k + 1)) - k;
                t /= 2 * k + 1;
                *zc.0 = (zc.1 + img * l as i64) as f64 / w;
            }
            acc += f(&z);
        }
        *slot = acc;
    }
    let m: f64 = row.iter().sum();
    if !(m > 0.0) {
        return Err(ProfileError::Domain("custom band density vanishes on the lattice".into()));
    }
    row.iter_mut().for_each(|v| *v /= m);
    VarianceProfile::circulant(torus, row, "band-custom")
}

/// Symmetric Sinkhorn balancing `S ← D^{-1/2} S D^{-1/2}` to a doubly
/// stochastic matrix.
pub fn symmetric_sinkhorn(mut s: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = s.nrows();
    for it in 0..SINKHORN_MAX_ITER {
        let r: Vec<f64> = (0..n).map(|i| s.row(i).iter().sum()).collect();
        let defect = r.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        if defect <= SINKHORN_TOL {
            return Ok(s);
        }
        let scale: Vec<f64> = r.iter().map(|v| 1.0 / v.sqrt()).collect();
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] *= scale[i] * scale[j];
            }
        }
        if it + 1 == SINKHORN_MAX_ITER {
            return Err(ProfileError::Convergence { iterations: it + 1, defect });
        }
    }
    unreachable!()
}

/// Random generalized Wigner profile with `c/N < σ²_ij < C/N`.
///
/// Built as `cJ + (1-c)T` where `T` is a Sinkhorn-balanced random symmetric
/// matrix, pulled toward `J` until the upper bound holds.
pub fn generalized_wigner_profile(n: usize, c: f64, cap: f64, seed: u64) -> Result<VarianceProfile> {
    if n == 0 || !(c > 0.0 && c <= 1.0 && cap >= 1.0) {
        return Err(ProfileError::Domain(format!("need N >= 1 and 0 < c <= 1 <= C (c={c}, C={cap})")));
    }
    let nf = n as f64;
    let j = DMatrix::from_element(n, n, 1.0 / nf);
    if c == 1.0 || cap == 1.0 {
        return VarianceProfile::square(j, "generalized-wigner");
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut raw = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..=a {
            let v: f64 = rng.random_range(0.05..1.0);
            let v = v * v;
            raw[(a, b)] = v;
            raw[(b, a)] = v;
        }
    }
    let mut t = symmetric_sinkhorn(raw)?;
    let upper = (cap - c) / ((1.0 - c) * nf);
    for _ in 0..200 {
        if t.max() < upper * (1.0 - 1e-9) {
            break;
        }
        t = (&t + &j) * 0.5;
    }
    let p = &j * c + t * (1.0 - c);
    let (lo, hi) = (p.min(), p.max());
    if !(lo > c / nf && hi < cap / nf) {
        return Err(ProfileError::Validation(format!(
            "entries span [{lo}, {hi}], outside ({}, {})",
            c / nf,
            cap / nf
        )));
    }
    VarianceProfile::square(p, "generalized-wigner")
}

/// Weighted Erdős–Rényi profile `σ²_ij = p_ij w_ij / d`.
pub fn sparse_profile(p: &DMatrix<f64>, w: &DMatrix<f64>, d: f64) -> Result<VarianceProfile> {
    if p.shape() != w.shape() || p.nrows() != p.ncols() || p.nrows() == 0 {
        return Err(ProfileError::Domain("p and w must be equal-size square matrices".into()));
    }
    if !(d > 0.0) {
        return Err(ProfileError::Domain(format!("target row sum must be positive, got {d}")));
    }
    if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(ProfileError::Validation("p must lie in [0, 1] entrywise".into()));
    }
    if w.iter().any(|v| !(*v >= 0.0)) {
        return Err(ProfileError::Validation("w must be nonnegative".into()));
    }
    let pw = p.component_mul(w);
    let n = pw.nrows();
    for i in 0..n {
        for k in 0..i {
            if (pw[(i, k)] - pw[(k, i)]).abs() > 1e-9 * d.max(1.0) {
                return Err(ProfileError::Validation(format!("p∘w is not symmetric at ({i}, {k})")));
            }
        }
    }
    let mut worst = (0, d, 0.0);
    for i in 0..n {
        let s: f64 = pw.row(i).iter().sum();
        if (s - d).abs() > worst.2 {
            worst = (i, s, (s - d).abs());
        }
    }
    if worst.2 > 1e-9 * d.max(1.0) {
        return Err(ProfileError::RowSum { row: worst.0, sum: worst.1, target: d });
    }
    VarianceProfile::square(pw / d, "sparse")
}

/// Block Wegner orbital profile on `D` blocks of size `M` with coupling `λ`.
pub fn block_wegner_profile(blocks: usize, m: usize, lambda: f64) -> Result<VarianceProfile> {
    if blocks == 0 || m == 0 || !(0.0..=1.0).contains(&lambda) {
        return Err(ProfileError::Domain(format!(
            "need D >= 1, M >= 1, λ in [0, 1] (D={blocks}, M={m}, λ={lambda})"
        )));
    }
    let n = blocks * m;
    let mf = m as f64;
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        let bi = i / m;
        for j in 0..n {
            let bj = j / m;
            let v = if bi == bj {
                if blocks == 1 {
                    1.0 / mf
                } else {
                    (1.0 - lambda) / mf
                }
            } else if blocks == 2 {
                lambda / mf
            } else if (bi + 1) % blocks == bj || (bj + 1) % blocks == bi {
                lambda / (2.0 * mf)
            } else {
                0.0
            };
            s[(i, j)] = v;
        }
    }
    VarianceProfile::square(s, "block-wegner")
}

/// Profile `σ²_ij = A_ij / d` of a `d`-regular graph.
pub fn regular_graph_profile(adj: &DMatrix<f64>, d: usize) -> Result<VarianceProfile> {
    let n = adj.nrows();
    if n == 0 || adj.ncols() != n || d == 0 {
        return Err(ProfileError::Domain("adjacency must be a nonempty square matrix and d >= 1".into()));
    }
    for i in 0..n {
        let s: f64 = adj.row(i).iter().sum();
        if (s - d as f64).abs() > 1e-12 {
            return Err(ProfileError::Validation(format!("row {i} has degree {s}, expected {d}")));
        }
        for j in 0..n {
            if adj[(i, j)] != adj[(j, i)] || !(adj[(i, j)] == 0.0 || adj[(i, j)] == 1.0) {
                return Err(ProfileError::Validation("adjacency must be symmetric 0/1".into()));
            }
        }
    }
    VarianceProfile::square(adj / d as f64, "regular-graph")
}

/// Builders for bipartite Wishart profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WishartBuilder {
    /// `σ²_ij = 1/N`.
    Uniform,
    /// Gaussian band around the diagonal `i/M ≈ j/N` with relative
    /// width `width`, balanced to the required margins.
    Banded { width: f64 },
}

/// Bipartite `M×N` profile with unit row sums and column sums `α = M/N`.
pub fn wishart_profile(m: usize, n: usize, builder: WishartBuilder) -> Result<VarianceProfile> {
    if m == 0 || m > n {
        return Err(ProfileError::Domain(format!("Wishart profile needs 1 <= M <= N (M={m}, N={n})")));
    }
    let alpha = m as f64 / n as f64;
    match builder {
        WishartBuilder::Uniform => VarianceProfile::bipartite(DMatrix::from_element(m, n, 1.0 / n as f64), "wishart-uniform"),
        WishartBuilder::Banded { width } => {
            if !(width > 0.0) {
                return Err(ProfileError::Domain("band width must be positive".into()));
            }
            let mut s = DMatrix::from_fn(m, n, |i, j| {
                let u = (i as f64 + 0.5) / m as f64 - (j as f64 + 0.5) / n as f64;
                let u = u - u.round();
                (-(u * u) / (2.0 * width * width)).exp() + 1e-3
            });
            for it in 0..SINKHORN_MAX_ITER {
                for i in 0..m {
                    let r: f64 = s.row(i).iter().sum();
                    s.row_mut(i).iter_mut().for_each(|v| *v /= r);
                }
                let mut defect: f64 = 0.0;
                for j in 0..n {
                    let c: f64 = s.column(j).iter().sum();
                    defect = defect.max((c - alpha).abs());
                    s.column_mut(j).iter_mut().for_each(|v| *v *= alpha / c);
                }
                if defect <= SINKHORN_TOL {
                    break;
                }
                if it + 1 == SINKHORN_MAX_ITER {
                    return Err(ProfileError::Convergence { iterations: it + 1, defect });
                }
            }
            VarianceProfile::bipartite(s, "wishart-banded")
        }
    }
}
