//! Dual graphs of stable curves.
//!
//! A graph is stored as half-edges: each half-edge sits at a vertex and is
//! either paired with another half-edge (together an edge, possibly a loop)
//! or is a leg carrying a marking label. Vertices carry a genus.

mod canon;
mod enumerate;
mod moves;

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::symmetric::UnionFind;

pub use canon::CanonicalCode;
pub use enumerate::{enumerate_top_strata, enumerate_top_strata_by_slots};
pub use moves::{
    apply_move, connectivity_certificate, moves_from, verify_certificate, Certificate,
    CertificateStep, ClassEntry, DualityMove, Pairing,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    /// Paired with this half-edge.
    Edge(usize),
    /// A marked leg.
    Leg(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StableGraph {
    genera: Vec<u32>,
    // vertex of each half-edge
    vertex: Vec<usize>,
    ends: Vec<End>,
}

impl StableGraph {
    /// Builds a connected graph; stability is not required here, see
    /// [`StableGraph::check_stable`].
    pub fn new(genera: Vec<u32>, edges: &[(usize, usize)], legs: &[(u32, usize)]) -> Result<Self> {
        let nv = genera.len();
        let mut vertex = Vec::with_capacity(2 * edges.len() + legs.len());
        let mut ends = Vec::with_capacity(vertex.capacity());
        for &(u, v) in edges {
            if u >= nv || v >= nv {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            let h = vertex.len();
            vertex.extend([u, v]);
            ends.extend([End::Edge(h + 1), End::Edge(h)]);
        }
        let mut labels: Vec<u32> = legs.iter().map(|l| l.0).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "repeated leg label in {labels:?}"
            )));
        }
        for &(label, v) in legs {
            if v >= nv {
                return Err(Error::InvalidGraph(format!(
                    "leg {label} on missing vertex {v}"
                )));
            }
            vertex.push(v);
            ends.push(End::Leg(label));
        }
        let g = StableGraph {
            genera,
            vertex,
            ends,
        };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    pub(crate) fn from_parts(genera: Vec<u32>, vertex: Vec<usize>, ends: Vec<End>) -> Self {
        StableGraph {
            genera,
            vertex,
            ends,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.genera.len()
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn half_edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn half_edge_vertex(&self, h: usize) -> usize {
        self.vertex[h]
    }

    pub fn end(&self, h: usize) -> End {
        self.ends[h]
    }

    /// Half-edges at `v`, ascending.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.vertex.len())
            .filter(|&h| self.vertex[h] == v)
            .collect()
    }

    /// One `(half-edge, partner)` pair per edge with the smaller half-edge first.
    pub fn edge_half_edges(&self) -> Vec<(usize, usize)> {
        self.ends
            .iter()
            .enumerate()
            .filter_map(|(h, e)| match *e {
                End::Edge(p) if h < p => Some((h, p)),
                _ => None,
            })
            .collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edge_half_edges()
            .into_iter()
            .map(|(a, b)| (self.vertex[a], self.vertex[b]))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_half_edges().len()
    }

    /// label -> vertex
    pub fn legs(&self) -> BTreeMap<u32, usize> {
        self.ends
            .iter()
            .enumerate()
            .filter_map(|(h, e)| match *e {
                End::Leg(l) => Some((l, self.vertex[h])),
                End::Edge(_) => None,
            })
            .collect()
    }

    pub fn leg_count(&self) -> usize {
        self.ends
            .iter()
            .filter(|e| matches!(e, End::Leg(_)))
            .count()
    }

    /// Special points on the component: legs plus edge ends, a loop counting
    /// twice.
    pub fn valence(&self, v: usize) -> usize {
        self.vertex.iter().filter(|&&x| x == v).count()
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        for (u, v) in self.edges() {
            uf.union(u, v);
        }
        self.vertex_count() > 0 && uf.set_count() == 1
    }

    /// First Betti number `#E - #V + 1` of a connected graph.
    pub fn betti(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Arithmetic genus `b_1 + sum h_v`.
    pub fn genus(&self) -> u32 {
        self.betti() as u32 + self.genera.iter().sum::<u32>()
    }

    pub fn check_stable(&self) -> Result<()> {
        for (v, &h) in self.genera.iter().enumerate() {
            let val = self.valence(v);
            if (h == 0 && val < 3) || (h == 1 && val < 1) {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} of genus {h} has valence {val}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_stable(&self) -> bool {
        self.check_stable().is_ok()
    }

    /// Every vertex rational and trivalent. Such a graph has `2g - 2 + n`
    /// vertices and `3g - 3 + n` edges.
    pub fn is_top_stratum(&self) -> bool {
        (0..self.vertex_count()).all(|v| self.genera[v] == 0 && self.valence(v) == 3)
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        canon::canonical_code(self, true)
    }

    /// Canonical code when the leg labels are forgotten.
    pub fn unlabeled_code(&self) -> CanonicalCode {
        canon::canonical_code(self, false)
    }

    /// The canonical representative of the isomorphism class (isomorphisms
    /// fix every leg label).
    pub fn canonical(&self) -> StableGraph {
        self.canonical_code().to_graph()
    }

    pub fn is_isomorphic(&self, other: &StableGraph) -> bool {
        self.canonical_code() == other.canonical_code()
    }
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    genus: u32,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<[usize; 2]>,
    legs: BTreeMap<u32, usize>,
}

impl Serialize for StableGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            vertices: self
                .genera
                .iter()
                .enumerate()
                .map(|(id, &genus)| VertexJson { id, genus })
                .collect(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            legs: self.legs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StableGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        let mut ids: Vec<usize> = j.vertices.iter().map(|v| v.id).collect();
        ids.sort_unstable();
        if ids != (0..j.vertices.len()).collect::<Vec<_>>() {
            return Err(serde::de::Error::custom("vertex ids must be 0..V"));
        }
        let mut genera = vec![0; j.vertices.len()];
        for v in &j.vertices {
            genera[v.id] = v.genus;
        }
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        let legs: Vec<(u32, usize)> = j.legs.into_iter().collect();
        StableGraph::new(genera, &edges, &legs).map_err(serde::de::Error::custom)
    }
}
