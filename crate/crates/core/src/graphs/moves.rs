//! The duality move on trivalent graphs and move-connectivity.
//!
//! Around a non-loop edge `{u, v}` with outer half-edges `i, j` at `u` and
//! `k, l` at `v`, the move regroups `(ij|kl)` into `(ik|jl)` or `(il|jk)`.
//! Outer half-edges are taken in ascending half-edge order.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{CanonicalCode, StableGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// `(ij|kl) -> (ik|jl)`
    First,
    /// `(ij|kl) -> (il|jk)`
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualityMove {
    /// Index into [`StableGraph::edges`].
    pub edge: usize,
    pub pairing: Pairing,
}

pub fn apply_move(g: &StableGraph, m: DualityMove) -> Result<StableGraph> {
    let pairs = g.edge_half_edges();
    let &(hu, hv) = pairs
        .get(m.edge)
        .ok_or_else(|| Error::InvalidMove(format!("no edge {}", m.edge)))?;
    let (u, v) = (g.half_edge_vertex(hu), g.half_edge_vertex(hv));
    if u == v {
        return Err(Error::InvalidMove(format!("edge {} is a loop", m.edge)));
    }
    for w in [u, v] {
        if g.valence(w) != 3 || g.genera()[w] != 0 {
            return Err(Error::InvalidMove(format!(
                "endpoint {w} is not a trivalent rational vertex"
            )));
        }
    }
    let outer = |w: usize, skip: usize| -> Vec<usize> {
        g.half_edges_at(w)
            .into_iter()
            .filter(|&h| h != skip)
            .collect()
    };
    let (at_u, at_v) = (outer(u, hu), outer(v, hv));
    let (j, k, l) = (at_u[1], at_v[0], at_v[1]);
    let mut vertex: Vec<usize> = (0..g.half_edge_count())
        .map(|h| g.half_edge_vertex(h))
        .collect();
    let ends = (0..g.half_edge_count()).map(|h| g.end(h)).collect();
    vertex[j] = v;
    match m.pairing {
        Pairing::First => vertex[k] = u,
        Pairing::Second => vertex[l] = u,
    }
    Ok(StableGraph::from_parts(g.genera().to_vec(), vertex, ends))
}

/// Every legal move on `g`: each non-loop edge with trivalent rational
/// endpoints, both pairings.
pub fn moves_from(g: &StableGraph) -> Vec<DualityMove> {
    let ok = |w: usize| g.valence(w) == 3 && g.genera()[w] == 0;
    g.edges()
        .into_iter()
        .enumerate()
        .filter(|&(_, (u, v))| u != v && ok(u) && ok(v))
        .flat_map(|(edge, _)| {
            [Pairing::First, Pairing::Second]
                .into_iter()
                .map(move |pairing| DualityMove { edge, pairing })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub hash: String,
    pub graph: StableGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateStep {
    pub from: String,
    #[serde(rename = "move")]
    pub mv: DualityMove,
    pub to: String,
}

/// Result of the breadth-first search over isomorphism classes. The
/// classes carry canonical graphs, so each step can be replayed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub g: u32,
    pub n: usize,
    pub classes: Vec<ClassEntry>,
    /// Class hashes grouped by reachability.
    pub components: Vec<Vec<String>>,
    /// Spanning forest: one step per class other than a component root.
    pub steps: Vec<CertificateStep>,
    /// Component count once leg labels are forgotten.
    pub unlabeled_components: usize,
}

impl Certificate {
    pub fn connected(&self) -> bool {
        self.components.len() == 1
    }
}

fn bfs(
    classes: &[StableGraph],
    code_of: impl Fn(&StableGraph) -> CanonicalCode,
) -> (Vec<Vec<usize>>, Vec<(usize, DualityMove, usize)>) {
    let index: BTreeMap<CanonicalCode, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, g)| (code_of(g), i))
        .collect();
    let mut seen = vec![false; classes.len()];
    let mut components = Vec::new();
    let mut steps = Vec::new();
    for root in 0..classes.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            for m in moves_from(&classes[c]) {
                let next = apply_move(&classes[c], m).expect("legal move");
                let t = index[&code_of(&next)];
                if !seen[t] {
                    seen[t] = true;
                    comp.push(t);
                    steps.push((c, m, t));
                    queue.push_back(t);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    (components, steps)
}

/// Breadth-first search over the top strata of `(g, n)` under the duality
/// move, labeled legs fixed. Several components are a finding, not an error.
pub fn connectivity_certificate(g: u32, n: usize) -> Result<Certificate> {
    let classes = super::enumerate_top_strata(g, n)?;
    let hashes: Vec<String> = classes.iter().map(|c| c.canonical_code().hash()).collect();
    let (components, steps) = bfs(&classes, StableGraph::canonical_code);

    let mut unlabeled: Vec<StableGraph> = Vec::new();
    let mut seen_codes = std::collections::BTreeSet::new();
    for c in &classes {
        if seen_codes.insert(c.unlabeled_code()) {
            unlabeled.push(c.clone());
        }
    }
    let (unlabeled_components, _) = bfs(&unlabeled, StableGraph::unlabeled_code);

    Ok(Certificate {
        g,
        n,
        classes: classes
            .iter()
            .zip(&hashes)
            .map(|(graph, hash)| ClassEntry {
                hash: hash.clone(),
                graph: graph.clone(),
            })
            .collect(),
        components: components
            .iter()
            .map(|c| c.iter().map(|&i| hashes[i].clone()).collect())
            .collect(),
        steps: steps
            .into_iter()
            .map(|(a, mv, b)| CertificateStep {
                from: hashes[a].clone(),
                mv,
                to: hashes[b].clone(),
            })
            .collect(),
        unlabeled_components: unlabeled_components.len(),
    })
}

/// Replays a certificate: every class graph is a canonical top stratum of
/// `(g, n)` with the stated hash, every step's move maps its source to its
/// target, and the steps connect each component from its first class.
pub fn verify_certificate(cert: &Certificate) -> Result<()> {
    let bad = |why: String| Err(Error::InvariantViolation(format!("certificate: {why}")));
    let mut by_hash: BTreeMap<&str, &StableGraph> = BTreeMap::new();
    for c in &cert.classes {
        let code = c.graph.canonical_code();
        if code.hash() != c.hash || code.to_graph() != c.graph {
            return bad(format!("class {} is not canonical", c.hash));
        }
        if !c.graph.is_top_stratum() || c.graph.genus() != cert.g || c.graph.leg_count() != cert.n {
            return bad(format!(
                "class {} is not a top stratum of ({}, {})",
                c.hash, cert.g, cert.n
            ));
        }
        if by_hash.insert(&c.hash, &c.graph).is_some() {
            return bad(format!("class {} listed twice", c.hash));
        }
    }
    let mut reached: BTreeMap<&str, usize> = BTreeMap::new();
    for (ci, comp) in cert.components.iter().enumerate() {
        let Some(root) = comp.first() else {
            return bad("empty component".into());
        };
        reached.insert(root, ci);
    }
    for s in &cert.steps {
        let (Some(from), Some(_)) = (by_hash.get(s.from.as_str()), by_hash.get(s.to.as_str()))
        else {
            return bad(format!("unknown class in step {} -> {}", s.from, s.to));
        };
        let Some(&ci) = reached.get(s.from.as_str()) else {
            return bad(format!("step from unreached class {}", s.from));
        };
        let image = apply_move(from, s.mv)?.canonical_code().hash();
        if image != s.to {
            return bad(format!(
                "move {:?} on {} gives {image}, not {}",
                s.mv, s.from, s.to
            ));
        }
        reached.insert(&s.to, ci);
    }
    for (ci, comp) in cert.components.iter().enumerate() {
        for h in comp {
            if reached.get(h.as_str()) != Some(&ci) {
                return bad(format!("class {h} not reached within its component"));
            }
        }
    }
    if reached.len() != cert.classes.len() {
        return bad("components do not cover the classes".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairing_graph(a: u32, b: u32, c: u32, d: u32) -> StableGraph {
        StableGraph::new(vec![0, 0], &[(0, 1)], &[(a, 0), (b, 0), (c, 1), (d, 1)]).unwrap()
    }

    #[test]
    fn genus_zero_four_points() {
        let g = pairing_graph(1, 2, 3, 4).canonical();
        let m = DualityMove {
            edge: 0,
            pairing: Pairing::First,
        };
        let once = apply_move(&g, m).unwrap();
        assert!(once.is_isomorphic(&pairing_graph(1, 3, 2, 4)));
        let twice = apply_move(&once.canonical(), m).unwrap();
        assert!(twice.is_isomorphic(&g));
        let other = apply_move(
            &g,
            DualityMove {
                edge: 0,
                pairing: Pairing::Second,
            },
        )
        .unwrap();
        assert!(other.is_isomorphic(&pairing_graph(1, 4, 2, 3)));
    }

    #[test]
    fn theta_to_dumbbell() {
        let theta = StableGraph::new(vec![0, 0], &[(0, 1), (0, 1), (0, 1)], &[]).unwrap();
        let dumbbell = StableGraph::new(vec![0, 0], &[(0, 0), (0, 1), (1, 1)], &[]).unwrap();
        for edge in 0..3 {
            let images: Vec<StableGraph> = [Pairing::First, Pairing::Second]
                .into_iter()
                .map(|pairing| apply_move(&theta, DualityMove { edge, pairing }).unwrap())
                .collect();
            assert!(
                images.iter().any(|g| g.is_isomorphic(&dumbbell)),
                "edge {edge}"
            );
            assert!(images.iter().all(|g| g.is_top_stratum() && g.genus() == 2));
        }
    }

    #[test]
    fn invalid_moves() {
        let dumbbell = StableGraph::new(vec![0, 0], &[(0, 0), (0, 1), (1, 1)], &[]).unwrap();
        let err = apply_move(
            &dumbbell,
            DualityMove {
                edge: 0,
                pairing: Pairing::First,
            },
        );
        assert!(matches!(err, Err(Error::InvalidMove(_))));
        let g = StableGraph::new(vec![0, 1], &[(0, 1)], &[(1, 0), (2, 0)]).unwrap();
        assert!(apply_move(
            &g,
            DualityMove {
                edge: 0,
                pairing: Pairing::First
            }
        )
        .is_err());
        assert!(apply_move(
            &g,
            DualityMove {
                edge: 5,
                pairing: Pairing::First
            }
        )
        .is_err());
    }

    #[test]
    fn moves_preserve_shape() {
        for (g, n) in [(0, 6), (1, 3), (2, 1), (3, 0)] {
            for graph in crate::graphs::enumerate_top_strata(g, n).unwrap() {
                for m in moves_from(&graph) {
                    let out = apply_move(&graph, m).unwrap();
                    assert!(out.is_connected() && out.is_top_stratum());
                    assert_eq!(out.genus(), g);
                    assert_eq!(out.vertex_count(), graph.vertex_count());
                    assert_eq!(out.edge_count(), graph.edge_count());
                    assert_eq!(
                        out.legs().keys().collect::<Vec<_>>(),
                        graph.legs().keys().collect::<Vec<_>>()
                    );
                }
            }
        }
    }

    #[test]
    fn small_certificates() {
        for (g, n, size) in [(0, 4, 3), (1, 1, 1), (2, 0, 2)] {
            let cert = connectivity_certificate(g, n).unwrap();
            assert!(cert.connected());
            assert_eq!(cert.classes.len(), size);
            assert_eq!(cert.steps.len(), size - 1);
            verify_certificate(&cert).unwrap();
        }
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut cert = connectivity_certificate(0, 4).unwrap();
        cert.steps[0].to = cert.steps[1].to.clone();
        assert!(verify_certificate(&cert).is_err());
        let mut cert = connectivity_certificate(0, 4).unwrap();
        cert.steps.pop();
        assert!(verify_certificate(&cert).is_err());
    }
}
