use crate::diagram::{EdgeKind, Step};
use crate::gluing::{Orientation, RibbonGluing};
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonEdge {
    pub tail: usize,
    pub head: usize,
    pub kind: EdgeKind,
}

/// The glued complex: vertices after identification, one edge per glued
/// pair and per open side, and the boundary walk of each polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RibbonGraph {
    pub perimeters: Vec<usize>,
    pub n_vertices: usize,
    pub edges: Vec<RibbonEdge>,
    /// Boundary walk of each face, starting at its marked vertex.
    pub faces: Vec<Vec<Step>>,
    pub marks: Vec<usize>,
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl RibbonGraph {
    /// `V − E + F` of the glued surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn tail(&self, s: Step) -> usize {
        let e = self.edges[s.edge];
        if s.forward {
            e.tail
        } else {
            e.head
        }
    }

    pub fn head(&self, s: Step) -> usize {
        let e = self.edges[s.edge];
        if s.forward {
            e.head
        } else {
            e.tail
        }
    }
}

/// Identifies polygon vertices according to the gluing and records the
/// resulting graph with its face walks.
pub fn glue(gluing: &RibbonGluing) -> Result<RibbonGraph> {
    gluing.validate()?;
    let k = gluing.sides();
    let g = gluing.gamma();
    let empties: Vec<usize> = (0..gluing.perimeters.len()).filter(|&j| gluing.perimeters[j] == 0).collect();
    let mut uf = UnionFind::new(k + empties.len());
    for &(s, t, o) in &gluing.pairs {
        match o {
            Orientation::Opposite => {
                uf.union(s, g[t]);
                uf.union(t, g[s]);
            }
            Orientation::Same => {
                uf.union(s, t);
                uf.union(g[s], g[t]);
            }
        }
    }
    let mut ids = vec![usize::MAX; k + empties.len()];
    let mut n_vertices = 0;
    let mut vid = |uf: &mut UnionFind, x: usize| {
        let r = uf.find(x);
        if ids[r] == usize::MAX {
            ids[r] = n_vertices;
            n_vertices += 1;
        }
        ids[r]
    };
    let mut side_step = vec![None; k];
    let mut edges = vec![];
    for &(s, t, o) in &gluing.pairs {
        let e = edges.len();
        edges.push(RibbonEdge { tail: vid(&mut uf, s), head: vid(&mut uf, g[s]), kind: EdgeKind::Interior });
        side_step[s] = Some(Step { edge: e, forward: true });
        side_step[t] = Some(Step { edge: e, forward: o == Orientation::Same });
    }
    for &i in &gluing.open {
        let e = edges.len();
        edges.push(RibbonEdge { tail: vid(&mut uf, i), head: vid(&mut uf, g[i]), kind: EdgeKind::Open });
        side_step[i] = Some(Step { edge: e, forward: true });
    }
    let mut faces = vec![];
    let mut marks = vec![];
    let mut off = 0;
    let mut extra = k;
    for &m in &gluing.perimeters {
        faces.push((off..off + m).map(|i| side_step[i].expect("validated gluing covers every side")).collect());
        if m == 0 {
            marks.push(vid(&mut uf, extra));
            extra += 1;
        } else {
            marks.push(vid(&mut uf, off));
        }
        off += m;
    }
    Ok(RibbonGraph { perimeters: gluing.perimeters.clone(), n_vertices, edges, faces, marks })
}
