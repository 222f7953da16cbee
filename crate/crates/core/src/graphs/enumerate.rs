//! Exhaustive generation of top strata.

use std::collections::BTreeSet;

use super::{CanonicalCode, End, StableGraph};
use crate::error::{Error, Result};
use crate::symmetric::is_stable;

fn shape(g: u32, n: usize) -> Result<(usize, usize)> {
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let v = 2 * g as usize + n - 2;
    let e = 3 * g as usize + n - 3;
    Ok((v, e))
}

/// All trivalent graphs with rational vertices, genus `g` and legs `1..=n`,
/// one per isomorphism class (isomorphisms fix legs), sorted by canonical
/// code.
///
/// Legs are placed in restricted-growth order (leg 1 on vertex 0, every
/// later leg on a used vertex or the next fresh one); the remaining degree
/// at each vertex is then filled by every symmetric multigraph with loops.
pub fn enumerate_top_strata(g: u32, n: usize) -> Result<Vec<StableGraph>> {
    let (nv, _) = shape(g, n)?;
    let mut found: BTreeSet<CanonicalCode> = BTreeSet::new();
    let mut legs_at = vec![0usize; nv];
    let mut leg_vertex = vec![0usize; n];
    place_legs(
        0,
        0,
        &mut legs_at,
        &mut leg_vertex,
        &mut |legs_at, leg_vertex| {
            let residual: Vec<usize> = legs_at.iter().map(|&k| 3 - k).collect();
            let mut edges = Vec::new();
            fill_edges(0, 0, residual, &mut edges, &mut |edges| {
                let legs: Vec<(u32, usize)> = leg_vertex
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (i as u32 + 1, v))
                    .collect();
                if let Ok(graph) = StableGraph::new(vec![0; nv], edges, &legs) {
                    found.insert(graph.canonical_code());
                }
            });
        },
    );
    Ok(found.into_iter().map(|c| c.to_graph()).collect())
}

fn place_legs(
    leg: usize,
    used: usize,
    legs_at: &mut Vec<usize>,
    leg_vertex: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize], &[usize]),
) {
    if leg == leg_vertex.len() {
        emit(legs_at, leg_vertex);
        return;
    }
    let limit = (used + 1).min(legs_at.len());
    for v in 0..limit {
        if legs_at[v] == 3 {
            continue;
        }
        legs_at[v] += 1;
        leg_vertex[leg] = v;
        place_legs(leg + 1, used.max(v + 1), legs_at, leg_vertex, emit);
        legs_at[v] -= 1;
    }
}

// Walks vertex pairs (u, w) with u <= w in order; a loop at u uses two units
// of u's residual degree.
fn fill_edges(
    u: usize,
    w: usize,
    mut residual: Vec<usize>,
    edges: &mut Vec<(usize, usize)>,
    emit: &mut dyn FnMut(&[(usize, usize)]),
) {
    let nv = residual.len();
    if u == nv {
        emit(edges);
        return;
    }
    if w == nv {
        if residual[u] == 0 {
            fill_edges(u + 1, u + 1, residual, edges, emit);
        }
        return;
    }
    let max = if u == w {
        residual[u] / 2
    } else {
        residual[u].min(residual[w])
    };
    for m in 0..=max {
        if u == w {
            residual[u] -= 2 * m;
        } else {
            residual[u] -= m;
            residual[w] -= m;
        }
        for _ in 0..m {
            edges.push((u, w));
        }
        fill_edges(u, w + 1, residual.clone(), edges, emit);
        for _ in 0..m {
            edges.pop();
        }
        if u == w {
            residual[u] += 2 * m;
        } else {
            residual[u] += m;
            residual[w] += m;
        }
    }
}

/// Slow independent enumeration: every assignment of legs to the `3V`
/// half-edge slots and every perfect matching of the remaining slots.
pub fn enumerate_top_strata_by_slots(g: u32, n: usize) -> Result<Vec<StableGraph>> {
    let (nv, _) = shape(g, n)?;
    let slots = 3 * nv;
    let mut found: BTreeSet<CanonicalCode> = BTreeSet::new();
    let mut taken = vec![false; slots];
    let mut leg_slot = vec![0usize; n];
    assign_slots(0, &mut taken, &mut leg_slot, &mut |taken, leg_slot| {
        let free: Vec<usize> = (0..slots).filter(|&s| !taken[s]).collect();
        for_each_matching(&free, &mut Vec::new(), &mut |pairs| {
            let mut vertex = Vec::new();
            let mut ends = Vec::new();
            for &(a, b) in pairs {
                let h = vertex.len();
                vertex.extend([a / 3, b / 3]);
                ends.extend([End::Edge(h + 1), End::Edge(h)]);
            }
            for (i, &s) in leg_slot.iter().enumerate() {
                vertex.push(s / 3);
                ends.push(End::Leg(i as u32 + 1));
            }
            let graph = StableGraph::from_parts(vec![0; nv], vertex, ends);
            if graph.is_connected() {
                found.insert(graph.canonical_code());
            }
        });
    });
    Ok(found.into_iter().map(|c| c.to_graph()).collect())
}

fn assign_slots(
    leg: usize,
    taken: &mut Vec<bool>,
    leg_slot: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[bool], &[usize]),
) {
    if leg == leg_slot.len() {
        emit(taken, leg_slot);
        return;
    }
    for s in 0..taken.len() {
        if !taken[s] {
            taken[s] = true;
            leg_slot[leg] = s;
            assign_slots(leg + 1, taken, leg_slot, emit);
            taken[s] = false;
        }
    }
}

fn for_each_matching(
    free: &[usize],
    pairs: &mut Vec<(usize, usize)>,
    emit: &mut dyn FnMut(&[(usize, usize)]),
) {
    let Some((&first, rest)) = free.split_first() else {
        emit(pairs);
        return;
    };
    for i in 0..rest.len() {
        let mut remaining = rest.to_vec();
        let partner = remaining.remove(i);
        pairs.push((first, partner));
        for_each_matching(&remaining, pairs, emit);
        pairs.pop();
    }
}
