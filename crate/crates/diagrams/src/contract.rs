use crate::diagram::{Diagram, EdgeKind, Step};
use crate::ribbon::RibbonGraph;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A contracted diagram with the weight of each of its edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contraction {
    pub diagram: Diagram,
    /// `w_e`: number of ribbon edges merged into diagram edge `e`.
    pub weights: Vec<usize>,
    /// Boundary steps of each face absorbed by collapsed trees.
    pub tree_steps: Vec<usize>,
    pub trees_removed: usize,
    pub euler_before: i64,
}

impl Contraction {
    /// `Σ_{e ∈ ∂D_j} w_e` for each face, with multiplicity.
    pub fn face_weights(&self) -> Vec<usize> {
        self.diagram.faces.iter().map(|f| f.iter().map(|s| self.weights[s.edge]).sum()).collect()
    }
}

/// Collapses trees, moves each mark to the root of its tree, and merges
/// chains through unmarked degree-2 vertices.
///
/// A degree-2 vertex joining an interior and an open edge is kept, since the
/// two carry different matrices.
pub fn okounkov_contract(g: &RibbonGraph) -> Contraction {
    let ne = g.edges.len();
    let mut alive = vec![true; ne];
    let mut deg = vec![0usize; g.n_vertices];
    for e in &g.edges {
        deg[e.tail] += 1;
        deg[e.head] += 1;
    }
    loop {
        let leaf = (0..ne).find(|&e| {
            let x = g.edges[e];
            alive[e] && x.tail != x.head && (deg[x.tail] == 1 || deg[x.head] == 1)
        });
        let Some(e) = leaf else { break };
        debug_assert_eq!(g.edges[e].kind, EdgeKind::Interior);
        alive[e] = false;
        deg[g.edges[e].tail] -= 1;
        deg[g.edges[e].head] -= 1;
    }
    let trees_removed = alive.iter().filter(|&&a| !a).count();

    let cores: Vec<Vec<Step>> = g.faces.iter().map(|f| f.iter().copied().filter(|s| alive[s.edge]).collect()).collect();
    let tree_steps: Vec<usize> = g.faces.iter().zip(&cores).map(|(f, c)| f.len() - c.len()).collect();
    let mut marked = vec![false; g.n_vertices];
    for c in &cores {
        if let Some(&s) = c.first() {
            marked[g.tail(s)] = true;
        }
    }
    let mut mixed = vec![(false, false); g.n_vertices];
    for (e, x) in g.edges.iter().enumerate() {
        if alive[e] {
            for v in [x.tail, x.head] {
                match x.kind {
                    EdgeKind::Interior => mixed[v].0 = true,
                    EdgeKind::Open => mixed[v].1 = true,
                }
            }
        }
    }
    let keep = |v: usize| marked[v] || deg[v] != 2 || (mixed[v].0 && mixed[v].1);

    let mut chain_id: HashMap<Vec<Step>, usize> = HashMap::new();
    let mut chain_len = vec![];
    let mut chain_kind = vec![];
    let mut words = vec![];
    for core in &cores {
        let mut word = vec![];
        let mut i = 0;
        while i < core.len() {
            let mut j = i;
            while !keep(g.head(core[j])) {
                j += 1;
            }
            let seq = core[i..=j].to_vec();
            let rev: Vec<Step> = seq.iter().rev().map(|s| Step { edge: s.edge, forward: !s.forward }).collect();
            if let Some(&c) = chain_id.get(&seq) {
                word.push(Step { edge: c, forward: true });
            } else if let Some(&c) = chain_id.get(&rev) {
                word.push(Step { edge: c, forward: false });
            } else {
                let c = chain_len.len();
                chain_len.push(seq.len());
                chain_kind.push(g.edges[seq[0].edge].kind);
                debug_assert!(seq.iter().all(|s| g.edges[s.edge].kind == chain_kind[c]));
                chain_id.insert(seq, c);
                word.push(Step { edge: c, forward: true });
            }
            i = j + 1;
        }
        words.push(word);
    }

    // Relabel by first appearance and orient along the first traversal.
    let mut relabel: Vec<Option<(usize, bool)>> = vec![None; chain_len.len()];
    let mut order = vec![];
    let faces: Vec<Vec<Step>> = words
        .iter()
        .map(|w| {
            w.iter()
                .map(|s| {
                    let (id, flip) = *relabel[s.edge].get_or_insert_with(|| {
                        order.push(s.edge);
                        (order.len() - 1, !s.forward)
                    });
                    Step { edge: id, forward: s.forward != flip }
                })
                .collect()
        })
        .collect();
    let diagram = Diagram { faces, kinds: order.iter().map(|&c| chain_kind[c]).collect() };
    Contraction {
        diagram,
        weights: order.iter().map(|&c| chain_len[c]).collect(),
        tree_steps,
        trees_removed,
        euler_before: g.euler_characteristic(),
    }
}
