//! Canonical forms by exhaustive search over vertex orderings.
//!
//! Vertices are first split into classes by iterated color refinement on
//! isomorphism-invariant data (genus, valence, loops, legs, then neighbor
//! colors). Only orderings that list the classes in color order are tried,
//! and the lexicographically least encoding among them is the canonical
//! code. Graphs at desk scale have few vertices, so this stays cheap.

use itertools::Itertools;
use sha2::{Digest, Sha256};

use super::{End, StableGraph};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    pub genera: Vec<u32>,
    /// `(u, v)` with `u <= v`, sorted.
    pub edges: Vec<(u16, u16)>,
    /// `(label, vertex)` sorted by label; with labels forgotten every label
    /// is 0 and the list is sorted by vertex.
    pub legs: Vec<(u32, u16)>,
}

impl CanonicalCode {
    /// The canonical graph: edges in code order (smaller endpoint's
    /// half-edge first), then legs by label. A code with forgotten labels
    /// gets labels `1..n` in vertex order.
    pub fn to_graph(&self) -> StableGraph {
        let mut vertex = Vec::new();
        let mut ends = Vec::new();
        for &(u, v) in &self.edges {
            let h = vertex.len();
            vertex.extend([u as usize, v as usize]);
            ends.extend([End::Edge(h + 1), End::Edge(h)]);
        }
        let unlabeled = self.legs.iter().all(|l| l.0 == 0);
        for (i, &(label, v)) in self.legs.iter().enumerate() {
            vertex.push(v as usize);
            let label = if unlabeled { i as u32 + 1 } else { label };
            ends.push(End::Leg(label));
        }
        StableGraph::from_parts(self.genera.clone(), vertex, ends)
    }

    /// Short stable digest of the code.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "{:?}|{:?}|{:?}",
            self.genera, self.edges, self.legs
        ));
        h.finalize()[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn refine_colors(g: &StableGraph, labeled: bool) -> Vec<usize> {
    let nv = g.vertex_count();
    let mut loops = vec![0usize; nv];
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (u, v) in g.edges() {
        if u == v {
            loops[u] += 1;
        } else {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
    }
    let mut legs: Vec<Vec<u32>> = vec![Vec::new(); nv];
    for (label, v) in g.legs() {
        legs[v].push(if labeled { label } else { 0 });
    }
    let initial: Vec<_> = (0..nv)
        .map(|v| (g.genera()[v], g.valence(v), loops[v], legs[v].clone()))
        .collect();
    let mut colors = rank(&initial);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..nv)
            .map(|v| {
                let mut ns: Vec<usize> = neighbors[v].iter().map(|&w| colors[w]).collect();
                ns.sort_unstable();
                (colors[v], ns)
            })
            .collect();
        let next = rank(&sigs);
        let before = colors.iter().max().map_or(0, |m| m + 1);
        let after = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if after == before {
            return colors;
        }
    }
}

/// Dense rank of each item among the distinct items.
fn rank<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = items.to_vec();
    distinct.sort();
    distinct.dedup();
    items
        .iter()
        .map(|x| distinct.binary_search(x).unwrap())
        .collect()
}

fn encode(g: &StableGraph, new_id: &[u16], labeled: bool) -> CanonicalCode {
    let mut genera = vec![0; g.vertex_count()];
    for (v, &h) in g.genera().iter().enumerate() {
        genera[new_id[v] as usize] = h;
    }
    let mut edges: Vec<(u16, u16)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (new_id[u], new_id[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let mut legs: Vec<(u32, u16)> = g
        .legs()
        .into_iter()
        .map(|(l, v)| (if labeled { l } else { 0 }, new_id[v]))
        .collect();
    legs.sort_unstable();
    CanonicalCode {
        genera,
        edges,
        legs,
    }
}

pub(super) fn canonical_code(g: &StableGraph, labeled: bool) -> CanonicalCode {
    let colors = refine_colors(g, labeled);
    let nv = g.vertex_count();
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); colors.iter().max().map_or(0, |m| m + 1)];
    for v in 0..nv {
        classes[colors[v]].push(v);
    }
    let mut offsets = Vec::with_capacity(classes.len());
    let mut acc = 0;
    for c in &classes {
        offsets.push(acc);
        acc += c.len();
    }
    let mut best: Option<CanonicalCode> = None;
    let mut new_id = vec![0u16; nv];
    let orderings = classes
        .iter()
        .map(|c| c.iter().copied().permutations(c.len()).collect::<Vec<_>>())
        .multi_cartesian_product();
    let mut try_order = |choice: &[Vec<usize>]| {
        for (ci, order) in choice.iter().enumerate() {
            for (i, &v) in order.iter().enumerate() {
                new_id[v] = (offsets[ci] + i) as u16;
            }
        }
        let code = encode(g, &new_id, labeled);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    };
    if classes.is_empty() {
        try_order(&[]);
    } else {
        for choice in orderings {
            try_order(&choice);
        }
    }
    best.expect("at least one ordering")
}
