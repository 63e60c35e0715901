use crate::{DiagramError, Result};
use irm_ensembles::Beta;
use serde::{Deserialize, Serialize};

/// How the two sides of a glued pair are matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `v_s = v_{γ(t)}`, `v_t = v_{γ(s)}`: the orientable gluing.
    Opposite,
    /// `v_s = v_t`, `v_{γ(s)} = v_{γ(t)}`: only for real matrices.
    Same,
}

/// A pairing of polygon sides with a set of sides left open.
///
/// Sides are numbered globally: polygon `j` owns the `m_j` consecutive
/// indices after those of polygons `0..j`, and side `i` runs from polygon
/// vertex `i` to vertex `γ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonGluing {
    pub perimeters: Vec<usize>,
    pub open: Vec<usize>,
    pub pairs: Vec<(usize, usize, Orientation)>,
    pub beta: Beta,
}

impl RibbonGluing {
    pub fn sides(&self) -> usize {
        self.perimeters.iter().sum()
    }

    /// Boundary permutation `γ`: the next side around the same polygon.
    pub fn gamma(&self) -> Vec<usize> {
        gamma_perm(&self.perimeters)
    }

    pub fn validate(&self) -> Result<()> {
        if self.perimeters.is_empty() {
            return Err(DiagramError::Malformed("at least one polygon is required".into()));
        }
        let k = self.sides();
        let mut seen = vec![false; k];
        let mut mark = |i: usize| -> Result<()> {
            if i >= k {
                return Err(DiagramError::Malformed(format!("side {i} out of range 0..{k}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(DiagramError::Malformed(format!("side {i} is used twice")));
            }
            Ok(())
        };
        for &i in &self.open {
            mark(i)?;
        }
        for &(s, t, o) in &self.pairs {
            mark(s)?;
            mark(t)?;
            if self.beta == Beta::Complex && o == Orientation::Same {
                return Err(DiagramError::Malformed(format!("pair ({s}, {t}) has same orientation for beta = 2")));
            }
        }
        if let Some(i) = seen.iter().position(|&b| !b) {
            return Err(DiagramError::Malformed(format!("side {i} is neither paired nor open")));
        }
        Ok(())
    }
}

pub(crate) fn gamma_perm(perimeters: &[usize]) -> Vec<usize> {
    let mut g = Vec::with_capacity(perimeters.iter().sum());
    let mut off = 0;
    for &m in perimeters {
        g.extend((0..m).map(|i| off + (i + 1) % m));
        off += m;
    }
    g
}

/// Largest total perimeter that [`enumerate_gluings`] accepts.
pub fn perimeter_budget(beta: Beta) -> usize {
    match beta {
        Beta::Real => 10,
        Beta::Complex => 12,
    }
}

fn double_factorial_odd(n: usize) -> f64 {
    // (n-1)!! for even n
    (1..n).step_by(2).map(|v| v as f64).product()
}

fn choose(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of gluings [`enumerate_gluings`] would produce.
pub fn gluing_count(perimeters: &[usize], beta: Beta, allow_open: bool) -> f64 {
    let k: usize = perimeters.iter().sum();
    let orient = |pairs: usize| match beta {
        Beta::Real => 2f64.powi(pairs as i32),
        Beta::Complex => 1.0,
    };
    if !allow_open {
        return if k % 2 == 0 { double_factorial_odd(k) * orient(k / 2) } else { 0.0 };
    }
    (0..=k).step_by(2).map(|j| choose(k, j) * double_factorial_odd(j) * orient(j / 2)).sum()
}

fn matchings(items: &[usize], out: &mut Vec<Vec<(usize, usize)>>, acc: &mut Vec<(usize, usize)>) {
    let Some((&a, rest)) = items.split_first() else {
        out.push(acc.clone());
        return;
    };
    for i in 0..rest.len() {
        let mut remaining = rest.to_vec();
        let b = remaining.remove(i);
        acc.push((a, b));
        matchings(&remaining, out, acc);
        acc.pop();
    }
}

fn gluings_on(perimeters: &[usize], beta: Beta, paired: Vec<usize>, open: Vec<usize>) -> Vec<RibbonGluing> {
    let mut ms = vec![];
    matchings(&paired, &mut ms, &mut vec![]);
    let mut out = vec![];
    for m in ms {
        let flips = match beta {
            Beta::Real => 1usize << m.len(),
            Beta::Complex => 1,
        };
        for mask in 0..flips {
            let pairs = m
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| {
                    let o = if mask >> i & 1 == 1 { Orientation::Same } else { Orientation::Opposite };
                    (a, b, o)
                })
                .collect();
            out.push(RibbonGluing { perimeters: perimeters.to_vec(), open: open.clone(), pairs, beta });
        }
    }
    out
}

/// Every gluing of the polygons exactly once, as a lazy stream grouped by the
/// open subset. With `allow_open` every even-complement subset of sides may
/// stay open; otherwise all sides are paired.
///
/// Refuses, before any work, when the total perimeter exceeds
/// [`perimeter_budget`].
pub fn enumerate_gluings(
    perimeters: &[usize],
    beta: Beta,
    allow_open: bool,
) -> Result<impl Iterator<Item = RibbonGluing>> {
    let k: usize = perimeters.iter().sum();
    if perimeters.is_empty() {
        return Err(DiagramError::Malformed("at least one polygon is required".into()));
    }
    let limit = perimeter_budget(beta);
    if k > limit {
        return Err(DiagramError::Budget {
            what: format!("gluings of perimeters {perimeters:?}"),
            estimate: gluing_count(perimeters, beta, allow_open),
            limit: gluing_count(&[limit], beta, allow_open),
        });
    }
    let perims = perimeters.to_vec();
    let masks: Vec<u32> = if allow_open {
        (0..1u32 << k).filter(|m| m.count_ones() % 2 == 0).collect()
    } else if k % 2 == 0 {
        vec![((1u64 << k) - 1) as u32]
    } else {
        vec![]
    };
    Ok(masks.into_iter().flat_map(move |mask| {
        let (paired, open): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| mask >> i & 1 == 1);
        gluings_on(&perims, beta, paired, open)
    }))
}
