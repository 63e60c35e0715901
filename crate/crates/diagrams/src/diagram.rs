use crate::ribbon::UnionFind;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Carries a power of the variance profile.
    Interior,
    /// Carries a power of the deformation.
    Open,
}

/// One traversal of an edge along a face boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

/// A reduced diagram in canonical form.
///
/// Each face is its boundary word starting at the marked vertex. Edges are
/// numbered by first appearance across the words and oriented along their
/// first traversal, so two contractions give equal values exactly when they
/// give the same diagram. An empty word is a trivial face (an isolated
/// marked vertex).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagram {
    pub faces: Vec<Vec<Step>>,
    pub kinds: Vec<EdgeKind>,
}

/// Vertex structure recovered from the face words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramVertices {
    pub count: usize,
    /// `(tail, head)` of each edge.
    pub ends: Vec<(usize, usize)>,
    /// Marked vertex of each face.
    pub marks: Vec<usize>,
    /// Degree of each vertex with loops counted twice.
    pub degrees: Vec<usize>,
}

impl Diagram {
    pub fn n_edges(&self) -> usize {
        self.kinds.len()
    }

    pub fn n_open(&self) -> usize {
        self.kinds.iter().filter(|&&k| k == EdgeKind::Open).count()
    }

    pub fn has_open(&self) -> bool {
        self.n_open() > 0
    }

    /// Number of edge traversals on each face boundary.
    pub fn face_lengths(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// `mult[e][j]`: how often face `j` traverses edge `e`.
    pub fn multiplicities(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.faces.len()]; self.n_edges()];
        for (j, f) in self.faces.iter().enumerate() {
            for s in f {
                m[s.edge][j] += 1;
            }
        }
        m
    }

    /// Vertices are the classes of edge ends, where the head of each step is
    /// glued to the tail of the next step in the same face word.
    pub fn vertices(&self) -> DiagramVertices {
        let ne = self.n_edges();
        let nf = self.faces.len();
        let tail = |s: &Step| if s.forward { 2 * s.edge } else { 2 * s.edge + 1 };
        let head = |s: &Step| if s.forward { 2 * s.edge + 1 } else { 2 * s.edge };
        let mut uf = UnionFind::new(2 * ne + nf);
        let mut raw_marks = vec![];
        for (j, f) in self.faces.iter().enumerate() {
            if f.is_empty() {
                raw_marks.push(2 * ne + j);
                continue;
            }
            for a in 0..f.len() {
                uf.union(head(&f[a]), tail(&f[(a + 1) % f.len()]));
            }
            raw_marks.push(tail(&f[0]));
        }
        let mut ids = vec![usize::MAX; 2 * ne + nf];
        let mut count = 0;
        let mut id = |uf: &mut UnionFind, x: usize| {
            let r = uf.find(x);
            if ids[r] == usize::MAX {
                ids[r] = count;
                count += 1;
            }
            ids[r]
        };
        let marks: Vec<usize> = raw_marks.iter().map(|&x| id(&mut uf, x)).collect();
        let ends: Vec<(usize, usize)> = (0..ne).map(|e| (id(&mut uf, 2 * e), id(&mut uf, 2 * e + 1))).collect();
        let mut degrees = vec![0; count];
        for &(u, v) in &ends {
            degrees[u] += 1;
            degrees[v] += 1;
        }
        DiagramVertices { count, ends, marks, degrees }
    }

    /// Open-edge endpoints, which form the boundary vertex set.
    pub fn boundary_vertices(&self) -> usize {
        let v = self.vertices();
        let mut seen = vec![false; v.count];
        for (e, &(a, b)) in v.ends.iter().enumerate() {
            if self.kinds[e] == EdgeKind::Open {
                seen[a] = true;
                seen[b] = true;
            }
        }
        seen.iter().filter(|&&b| b).count()
    }

    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices().count as i64 - self.n_edges() as i64 + self.faces.len() as i64
    }

    /// Every face lies in a single connected component.
    pub fn is_connected(&self) -> bool {
        let v = self.vertices();
        let mut uf = UnionFind::new(v.count);
        for &(a, b) in &v.ends {
            uf.union(a, b);
        }
        let r = uf.find(v.marks[0]);
        v.marks.iter().all(|&m| uf.find(m) == r)
    }

    /// All faces trivial.
    pub fn is_trivial(&self) -> bool {
        self.faces.iter().all(Vec::is_empty)
    }

    /// Unmarked vertices have degree at least 3 and marked ones at least 2,
    /// apart from isolated marked vertices of trivial faces.
    pub fn satisfies_degree_bounds(&self) -> bool {
        let v = self.vertices();
        (0..v.count).all(|x| {
            let marked = v.marks.contains(&x);
            let d = v.degrees[x];
            if marked {
                d >= 2 || d == 0
            } else {
                d >= 3
            }
        })
    }

    /// Compact printable form, e.g. `[+0+1-0-1] I,I`.
    pub fn code(&self) -> String {
        let mut s = String::new();
        for (j, f) in self.faces.iter().enumerate() {
            s.push(if j == 0 { '[' } else { '|' });
            for st in f {
                let _ = write!(s, "{}{}", if st.forward { '+' } else { '-' }, st.edge);
            }
        }
        s.push_str("] ");
        let kinds: Vec<&str> = self.kinds.iter().map(|k| if *k == EdgeKind::Interior { "I" } else { "O" }).collect();
        s.push_str(&kinds.join(","));
        s
    }
}
