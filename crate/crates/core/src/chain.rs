//! Covers of a chain of rational curves.
//!
//! Put the `r + 1` branch points of a cover on a chain of `P^1`s: segment
//! `i` carries the `i`-th point of the chain order, segment 1 also carries
//! the first one as its left end. With base monodromies `m_1..m_{r+1}` and
//! partial products `rho_0 = m_1`, `rho_i = m_{i+1} ∘ rho_{i-1}`, the cover
//! over segment `i` has one component per orbit of `<rho_{i-1}, rho_i>`,
//! and over junction `i` one node per cycle of `rho_i`. Legs are the cycles
//! of `sigma_inf`, attached on the segment holding infinity.
//!
//! Component genera come from Riemann-Hurwitz over the three special points
//! of each segment and are checked to vanish, not assumed.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphs::{CanonicalCode, End, StableGraph};
use crate::hurwitz::{self, MonodromyTuple, DEFAULT_BUDGET};
use crate::scalar::{self, factorial, Scalar};
use crate::symmetric::{aut_count, HurwitzProblem, Permutation};

/// Order of the branch points along the chain. Infinity always sits at the
/// left end: every segment must carry a simple branch point in its middle,
/// otherwise components with more than three special points survive
/// stabilization.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ChainLayout {
    /// `sigma_inf, tau_1, .., tau_r`
    #[default]
    Forward,
    /// `sigma_inf^-1, tau_r, .., tau_1`, the inverse tuple read backwards.
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainVertex {
    /// 1-based segment.
    pub segment: usize,
    /// 0-based sheets in this component.
    pub points: Vec<usize>,
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainEdge {
    /// 1-based junction between segments `junction` and `junction + 1`.
    pub junction: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCoverGraph {
    pub r: usize,
    pub d: usize,
    pub vertices: Vec<ChainVertex>,
    pub edges: Vec<ChainEdge>,
    /// `(label, vertex)`
    pub legs: Vec<(u32, usize)>,
}

impl ChainCoverGraph {
    pub fn to_graph(&self) -> Result<StableGraph> {
        let genera = self.vertices.iter().map(|v| v.genus).collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.from, e.to)).collect();
        StableGraph::new(genera, &edges, &self.legs)
    }
}

/// Assigns labels `1..n` to the cycles of `sigma`: label `i` goes to the
/// unused cycle of length `alpha_i` with the smallest point.
fn label_cycles(sigma: &[u8], alpha: &[u32]) -> Result<Vec<(u32, usize)>> {
    let d = sigma.len();
    let mut seen = vec![false; d];
    let mut cycles: Vec<(usize, usize)> = Vec::new(); // (length, min point)
    for s in 0..d {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = sigma[x] as usize;
        }
        cycles.push((len, s));
    }
    let mut used = vec![false; cycles.len()];
    let mut out = Vec::with_capacity(alpha.len());
    for (i, &a) in alpha.iter().enumerate() {
        let j = (0..cycles.len())
            .find(|&j| !used[j] && cycles[j].0 == a as usize)
            .ok_or_else(|| {
                Error::InvariantViolation(format!("sigma_inf has no free cycle of length {a}"))
            })?;
        used[j] = true;
        out.push((i as u32 + 1, cycles[j].1));
    }
    if used.iter().any(|u| !u) {
        return Err(Error::InvariantViolation(
            "sigma_inf has extra cycles".into(),
        ));
    }
    Ok(out)
}

fn compose_into(out: &mut [u8], p: &[u8], q: &[u8]) {
    for (o, &x) in out.iter_mut().zip(q) {
        *o = p[x as usize];
    }
}

/// Orbit labels of the group generated by two permutations, each orbit
/// named by its smallest point.
fn orbits(a: &[u8], b: &[u8], out: &mut [u8]) {
    let d = a.len();
    for (i, o) in out.iter_mut().enumerate() {
        *o = i as u8;
    }
    fn root(p: &mut [u8], mut x: usize) -> usize {
        while p[x] as usize != x {
            p[x] = p[p[x] as usize];
            x = p[x] as usize;
        }
        x
    }
    for x in 0..d {
        for y in [a[x] as usize, b[x] as usize] {
            let (rx, ry) = (root(out, x), root(out, y));
            if rx != ry {
                let (lo, hi) = (rx.min(ry), rx.max(ry));
                out[hi] = lo as u8;
            }
        }
    }
    for x in 0..d {
        out[x] = root(out, x) as u8;
    }
}

/// Cycles of `p` restricted to the points whose orbit label is `label`.
fn cycles_within(p: &[u8], labels: &[u8], label: u8) -> usize {
    let mut seen = [false; hurwitz::MAX_ORACLE_DEGREE];
    let mut count = 0;
    for s in 0..p.len() {
        if labels[s] != label || seen[s] {
            continue;
        }
        count += 1;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
        }
    }
    count
}

/// Builds the dual graph of the cover of the chain with base monodromies
/// `chain` (product `m_{r+1} ∘ … ∘ m_1 = id`), infinity being `chain[0]`.
fn build_chain(chain: &[Vec<u8>], alpha: &[u32]) -> Result<ChainCoverGraph> {
    let d = chain[0].len();
    let r = chain.len() - 1;
    let sigma = &chain[0];
    let leg_cycles = label_cycles(sigma, alpha)?;
    if r == 0 {
        // a single unbranched P^1 covered by d = 1 sheet
        if d != 1 {
            return Err(Error::InvariantViolation("r = 0 needs d = 1".into()));
        }
        return Ok(ChainCoverGraph {
            r,
            d,
            vertices: vec![ChainVertex {
                segment: 1,
                points: vec![0],
                genus: 0,
            }],
            edges: Vec::new(),
            legs: leg_cycles.iter().map(|&(l, _)| (l, 0)).collect(),
        });
    }
    // rhos[i] for i = 0..=r
    let mut rhos: Vec<Vec<u8>> = Vec::with_capacity(r + 1);
    rhos.push(chain[0].clone());
    for i in 1..=r {
        let mut next = vec![0u8; d];
        compose_into(&mut next, &chain[i], &rhos[i - 1]);
        rhos.push(next);
    }
    if rhos[r].iter().enumerate().any(|(i, &x)| i != x as usize) {
        return Err(Error::InvariantViolation(
            "monodromy product is not the identity".into(),
        ));
    }
    let mut vertices = Vec::new();
    // comp[i-1][x]: vertex of segment i containing sheet x
    let mut comp: Vec<Vec<usize>> = Vec::with_capacity(r);
    let mut labels = vec![0u8; d];
    for seg in 1..=r {
        let (left, right) = (&rhos[seg - 1], &rhos[seg]);
        orbits(left, right, &mut labels);
        let middle = &chain[seg];
        let mut local = vec![usize::MAX; d];
        for x in 0..d {
            if labels[x] as usize != x {
                continue;
            }
            let points: Vec<usize> = (0..d).filter(|&y| labels[y] as usize == x).collect();
            let m = points.len() as i64;
            let lab = labels[x];
            // 2h - 2 = -2m + sum over the three points of (m - #cycles)
            let twice_h = m + 2
                - cycles_within(left, &labels, lab) as i64
                - cycles_within(middle, &labels, lab) as i64
                - cycles_within(right, &labels, lab) as i64;
            if twice_h < 0 || twice_h % 2 != 0 {
                return Err(Error::InvariantViolation(format!(
                    "Riemann-Hurwitz gives 2h = {twice_h} on segment {seg}"
                )));
            }
            local[x] = vertices.len();
            vertices.push(ChainVertex {
                segment: seg,
                points,
                genus: (twice_h / 2) as u32,
            });
        }
        comp.push((0..d).map(|y| local[labels[y] as usize]).collect());
    }
    let mut edges = Vec::new();
    for j in 1..r {
        let rho = &rhos[j];
        let mut seen = vec![false; d];
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = rho[x] as usize;
            }
            edges.push(ChainEdge {
                junction: j,
                from: comp[j - 1][s],
                to: comp[j][s],
            });
        }
    }
    let legs = leg_cycles
        .iter()
        .map(|&(label, point)| (label, comp[0][point]))
        .collect();
    Ok(ChainCoverGraph {
        r,
        d,
        vertices,
        edges,
        legs,
    })
}

/// Base monodromies in chain order, infinity first.
fn chain_order(sigma: &[u8], taus: &[(u8, u8)], layout: ChainLayout) -> Vec<Vec<u8>> {
    let d = sigma.len();
    let transposition = |&(a, b): &(u8, u8)| {
        let mut t: Vec<u8> = (0..d as u8).collect();
        t.swap(a as usize, b as usize);
        t
    };
    let mut base: Vec<Vec<u8>> = Vec::with_capacity(taus.len() + 1);
    match layout {
        ChainLayout::Forward => {
            base.push(sigma.to_vec());
            base.extend(taus.iter().map(transposition));
        }
        ChainLayout::Reversed => {
            let mut inv = vec![0u8; d];
            for (i, &x) in sigma.iter().enumerate() {
                inv[x as usize] = i as u8;
            }
            base.push(inv);
            base.extend(taus.iter().rev().map(transposition));
        }
    }
    base
}

fn tuple_parts(t: &MonodromyTuple) -> Result<(Vec<u8>, Vec<(u8, u8)>)> {
    if t.d() > hurwitz::MAX_ORACLE_DEGREE {
        return Err(Error::InvariantViolation(format!(
            "degree {} too large",
            t.d()
        )));
    }
    let sigma = t.sigma_inf.images().iter().map(|&x| x as u8).collect();
    let taus = t
        .taus
        .iter()
        .map(|p| {
            p.as_transposition()
                .map(|(a, b)| (a as u8, b as u8))
                .ok_or_else(|| Error::InvariantViolation(format!("{p} is not a transposition")))
        })
        .collect::<Result<_>>()?;
    Ok((sigma, taus))
}

/// Dual graph of the cover of the chain, infinity at the left end.
pub fn cover_of_chain(t: &MonodromyTuple, ordered_alpha: &[u32]) -> Result<ChainCoverGraph> {
    cover_of_chain_with(t, ordered_alpha, ChainLayout::default())
}

pub fn cover_of_chain_with(
    t: &MonodromyTuple,
    ordered_alpha: &[u32],
    layout: ChainLayout,
) -> Result<ChainCoverGraph> {
    let (sigma, taus) = tuple_parts(t)?;
    build_chain(&chain_order(&sigma, &taus, layout), ordered_alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Removal {
    Contract,
    Smooth,
}

/// Contracts rational tails and smooths rational bridges until every
/// rational vertex has valence at least 3, visiting vertices in `order`
/// (a priority list of vertex ids). The result is not canonicalized.
fn stabilize_raw(g: &StableGraph, order: &[usize]) -> Result<StableGraph> {
    let nv = g.vertex_count();
    let nh = g.half_edge_count();
    let vertex: Vec<usize> = (0..nh).map(|h| g.half_edge_vertex(h)).collect();
    let mut ends: Vec<End> = (0..nh).map(|h| g.end(h)).collect();
    let mut alive_h = vec![true; nh];
    let mut alive_v = vec![true; nv];
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for h in 0..nh {
        at[vertex[h]].push(h);
    }
    loop {
        let found = order.iter().copied().find_map(|v| {
            if !alive_v[v] || g.genera()[v] != 0 {
                return None;
            }
            match at[v].len() {
                0 | 1 => Some((v, Removal::Contract)),
                2 => Some((v, Removal::Smooth)),
                _ => None,
            }
        });
        let Some((v, kind)) = found else { break };
        match (kind, &at[v][..]) {
            (Removal::Contract, &[h]) => {
                let End::Edge(p) = ends[h] else {
                    return Err(Error::UnstableCurve);
                };
                let w = vertex[p];
                at[w].retain(|&x| x != p);
                alive_h[h] = false;
                alive_h[p] = false;
            }
            (Removal::Smooth, &[h1, h2]) => match (ends[h1], ends[h2]) {
                (End::Leg(_), End::Leg(_)) => return Err(Error::UnstableCurve),
                (End::Edge(p), _) if p == h2 => return Err(Error::UnstableCurve),
                (End::Leg(l), End::Edge(p)) | (End::Edge(p), End::Leg(l)) => {
                    ends[p] = End::Leg(l);
                    alive_h[h1] = false;
                    alive_h[h2] = false;
                }
                (End::Edge(p1), End::Edge(p2)) => {
                    ends[p1] = End::Edge(p2);
                    ends[p2] = End::Edge(p1);
                    alive_h[h1] = false;
                    alive_h[h2] = false;
                }
            },
            _ => return Err(Error::UnstableCurve),
        }
        alive_v[v] = false;
        at[v].clear();
    }
    if !alive_v.iter().any(|&a| a) {
        return Err(Error::UnstableCurve);
    }
    let mut new_v = vec![usize::MAX; nv];
    let mut genera = Vec::new();
    for v in 0..nv {
        if alive_v[v] {
            new_v[v] = genera.len();
            genera.push(g.genera()[v]);
        }
    }
    let mut new_h = vec![usize::MAX; nh];
    let mut k = 0;
    for h in 0..nh {
        if alive_h[h] {
            new_h[h] = k;
            k += 1;
        }
    }
    let mut out_vertex = Vec::with_capacity(k);
    let mut out_ends = Vec::with_capacity(k);
    for h in 0..nh {
        if alive_h[h] {
            out_vertex.push(new_v[vertex[h]]);
            out_ends.push(match ends[h] {
                End::Edge(p) => End::Edge(new_h[p]),
                leg => leg,
            });
        }
    }
    Ok(StableGraph::from_parts(genera, out_vertex, out_ends))
}

/// Stabilizes a connected graph whose rational vertices may be unstable and
/// returns the canonical form. Genus and legs are preserved.
pub fn stabilize(g: &StableGraph) -> Result<StableGraph> {
    let order: Vec<usize> = (0..g.vertex_count()).collect();
    Ok(stabilize_raw(g, &order)?.canonical())
}

/// As [`stabilize`] with an explicit vertex processing priority.
pub fn stabilize_in_order(g: &StableGraph, order: &[usize]) -> Result<StableGraph> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..g.vertex_count()).collect::<Vec<_>>() {
        return Err(Error::InvalidGraph(
            "order must be a permutation of the vertices".into(),
        ));
    }
    Ok(stabilize_raw(g, order)?.canonical())
}

/// Exact weights of top strata making up a labeled Hurwitz class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumHistogram {
    pub problem: HurwitzProblem,
    pub layout: ChainLayout,
    pub entries: BTreeMap<CanonicalCode, Scalar>,
    pub total: Scalar,
    /// `#Aut(alpha) · H^g_alpha` from the class-algebra route.
    pub expected_total: Scalar,
    pub tuples: u64,
}

impl StratumHistogram {
    pub fn matches(&self) -> bool {
        self.total == self.expected_total
    }
}

impl Serialize for StratumHistogram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            hash: String,
            graph: StableGraph,
            #[serde(with = "scalar::serde_str")]
            weight: Scalar,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            g: u32,
            alpha: &'a [u32],
            layout: ChainLayout,
            tuples: u64,
            strata: Vec<Entry>,
            #[serde(with = "scalar::serde_str")]
            total: Scalar,
            #[serde(with = "scalar::serde_str")]
            expected_total: Scalar,
            #[serde(rename = "match")]
            matches: bool,
        }
        Out {
            g: self.problem.genus,
            alpha: &self.problem.alpha,
            layout: self.layout,
            tuples: self.tuples,
            strata: self
                .entries
                .iter()
                .map(|(code, w)| Entry {
                    hash: code.hash(),
                    graph: code.to_graph(),
                    weight: w.clone(),
                })
                .collect(),
            total: self.total.clone(),
            expected_total: self.expected_total.clone(),
            matches: self.matches(),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StrataOptions {
    pub budget: u128,
    pub layout: ChainLayout,
    pub engine: Engine,
}

impl Default for StrataOptions {
    fn default() -> Self {
        StrataOptions {
            budget: DEFAULT_BUDGET,
            layout: ChainLayout::default(),
            engine: Engine::default(),
        }
    }
}

/// How each tuple is turned into a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Follows the cycles through the chain. Only the component holding the
    /// simple branch point of a segment can be stable; all others are
    /// cylinders that stabilization smooths away.
    #[default]
    Traced,
    /// Builds the whole chain cover with a Riemann-Hurwitz genus per
    /// component, then stabilizes it.
    Full,
}

const MAX_THREADS: usize = 64;

/// Compact record of one tuple's cycle threads: for each segment whether its
/// transposition joins or cuts, then the segment consuming each thread.
#[derive(Clone)]
struct Trace {
    bytes: [u8; MAX_THREADS + 32],
    len: u8,
}

impl Trace {
    fn used(&self) -> &[u8] {
        &self.bytes[..self.len as usize]
    }
}

impl PartialEq for Trace {
    fn eq(&self, other: &Self) -> bool {
        self.used() == other.used()
    }
}

impl Eq for Trace {}

impl std::hash::Hash for Trace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.used().hash(state)
    }
}

const DANGLING: u8 = u8::MAX;

/// Infinity's monodromy with its cycles labeled as legs.
#[derive(Clone, PartialEq, Eq)]
struct TraceStart {
    d: usize,
    n: usize,
    sigma: [u8; hurwitz::MAX_ORACLE_DEGREE],
    thread_of: [u8; hurwitz::MAX_ORACLE_DEGREE],
}

impl TraceStart {
    fn new(sigma: &[u8], alpha: &[u32]) -> Result<Self> {
        let d = sigma.len();
        let mut start = TraceStart {
            d,
            n: alpha.len(),
            sigma: [0; hurwitz::MAX_ORACLE_DEGREE],
            thread_of: [0; hurwitz::MAX_ORACLE_DEGREE],
        };
        start.sigma[..d].copy_from_slice(sigma);
        for (label, point) in label_cycles(sigma, alpha)? {
            let mut x = point;
            loop {
                start.thread_of[x] = (label - 1) as u8;
                x = sigma[x] as usize;
                if x == point {
                    break;
                }
            }
        }
        Ok(start)
    }
}

/// Threads are numbered legs first (`0..n`), then in order of creation. A
/// join consumes two threads and creates one, a cut consumes one and
/// creates two; threads alive at the right end dangle.
fn trace(start: &TraceStart, taus: impl Iterator<Item = (u8, u8)>) -> Result<Trace> {
    let d = start.d;
    let mut rho = start.sigma;
    let mut thread_of = start.thread_of;
    let mut kinds = [0u8; 32];
    let mut sinks = [DANGLING; MAX_THREADS];
    let mut next = start.n;
    let mut r = 0;
    let paint = |rho: &[u8], thread_of: &mut [u8], start: usize, next: &mut usize| -> Result<()> {
        if *next >= MAX_THREADS {
            return Err(Error::InvariantViolation("too many cycle threads".into()));
        }
        let mut x = start;
        loop {
            thread_of[x] = *next as u8;
            x = rho[x] as usize;
            if x == start {
                break;
            }
        }
        *next += 1;
        Ok(())
    };
    for (a, b) in taus {
        if r >= kinds.len() {
            return Err(Error::InvariantViolation("chain too long".into()));
        }
        let (a, b) = (a as usize, b as usize);
        let (ta, tb) = (thread_of[a], thread_of[b]);
        // tau ∘ rho
        for y in rho[..d].iter_mut() {
            if *y as usize == a {
                *y = b as u8;
            } else if *y as usize == b {
                *y = a as u8;
            }
        }
        if ta != tb {
            sinks[ta as usize] = r as u8;
            sinks[tb as usize] = r as u8;
            kinds[r] = 0;
            paint(&rho[..d], &mut thread_of, a, &mut next)?;
        } else {
            sinks[ta as usize] = r as u8;
            kinds[r] = 1;
            paint(&rho[..d], &mut thread_of, a, &mut next)?;
            paint(&rho[..d], &mut thread_of, b, &mut next)?;
        }
        r += 1;
    }
    if rho[..d].iter().enumerate().any(|(i, &x)| i != x as usize) {
        return Err(Error::InvariantViolation(
            "monodromy product is not the identity".into(),
        ));
    }
    let mut bytes = [0u8; MAX_THREADS + 32];
    bytes[..r].copy_from_slice(&kinds[..r]);
    bytes[r..r + next].copy_from_slice(&sinks[..next]);
    Ok(Trace {
        bytes,
        len: (r + next) as u8,
    })
}

/// Rebuilds the (unstabilized) curve recorded by a trace, one rational
/// vertex per segment.
fn trace_graph(t: &Trace, r: usize, n: usize) -> Result<StableGraph> {
    let kinds = &t.bytes[..r];
    let sinks = &t.bytes[r..t.len as usize];
    if r == 0 {
        let legs: Vec<(u32, usize)> = (1..=n as u32).map(|l| (l, 0)).collect();
        return StableGraph::new(vec![0], &[], &legs);
    }
    let mut sources: Vec<Option<usize>> = vec![None; n];
    for (v, &k) in kinds.iter().enumerate() {
        sources.push(Some(v));
        if k == 1 {
            sources.push(Some(v));
        }
    }
    let mut edges = Vec::new();
    let mut legs = Vec::new();
    for (t, (&src, &sink)) in sources.iter().zip(sinks).enumerate() {
        match (src, sink) {
            (None, DANGLING) => {
                return Err(Error::InvariantViolation(format!(
                    "leg {} never meets a branch point",
                    t + 1
                )))
            }
            (None, s) => legs.push((t as u32 + 1, s as usize)),
            (Some(_), DANGLING) => {}
            (Some(u), s) => edges.push((u, s as usize)),
        }
    }
    StableGraph::new(vec![0; r], &edges, &legs)
}

/// Strata already computed by any worker.
#[derive(Default)]
struct SharedMemo {
    traced: RwLock<HashMap<Trace, CanonicalCode>>,
    full: RwLock<HashMap<StableGraph, CanonicalCode>>,
}

struct Accumulator<'a> {
    problem: &'a HurwitzProblem,
    opts: StrataOptions,
    shared: &'a SharedMemo,
    slots: Vec<(CanonicalCode, u64)>,
    traced: FxHashMap<Trace, usize>,
    full: HashMap<StableGraph, usize>,
    start: Option<(Vec<u8>, TraceStart)>,
    tuples: u64,
    violation: Option<String>,
}

impl<'a> Accumulator<'a> {
    fn new(problem: &'a HurwitzProblem, opts: StrataOptions, shared: &'a SharedMemo) -> Self {
        Accumulator {
            problem,
            opts,
            shared,
            slots: Vec::new(),
            traced: FxHashMap::default(),
            full: HashMap::new(),
            start: None,
            tuples: 0,
            violation: None,
        }
    }

    /// Slot of the stratum of one tuple.
    fn slot(&mut self, sigma: &[u8], taus: &[(u8, u8)]) -> Result<usize> {
        match self.opts.engine {
            Engine::Traced => {
                if self.start.as_ref().is_none_or(|(s, _)| s != sigma) {
                    let first = &chain_order(sigma, &[], self.opts.layout)[0];
                    self.start =
                        Some((sigma.to_vec(), TraceStart::new(first, &self.problem.alpha)?));
                }
                let start = &self.start.as_ref().expect("set above").1;
                let t = match self.opts.layout {
                    ChainLayout::Forward => trace(start, taus.iter().copied())?,
                    ChainLayout::Reversed => trace(start, taus.iter().rev().copied())?,
                };
                if let Some(&i) = self.traced.get(&t) {
                    return Ok(i);
                }
                let known = self
                    .shared
                    .traced
                    .read()
                    .expect("memo lock")
                    .get(&t)
                    .cloned();
                let code = match known {
                    Some(code) => code,
                    None => {
                        let graph = trace_graph(&t, taus.len(), self.problem.n())?;
                        let code = checked_stabilization(self.problem, &graph)?;
                        self.shared
                            .traced
                            .write()
                            .expect("memo lock")
                            .insert(t.clone(), code.clone());
                        code
                    }
                };
                let i = self.intern(code);
                self.traced.insert(t, i);
                Ok(i)
            }
            Engine::Full => {
                let cover = build_chain(
                    &chain_order(sigma, taus, self.opts.layout),
                    &self.problem.alpha,
                )?;
                if let Some(v) = cover.vertices.iter().find(|v| v.genus != 0) {
                    return Err(Error::InvariantViolation(format!(
                        "component of genus {} over segment {}",
                        v.genus, v.segment
                    )));
                }
                let graph = cover.to_graph()?;
                if let Some(&i) = self.full.get(&graph) {
                    return Ok(i);
                }
                let known = self
                    .shared
                    .full
                    .read()
                    .expect("memo lock")
                    .get(&graph)
                    .cloned();
                let code = match known {
                    Some(code) => code,
                    None => {
                        let code = checked_stabilization(self.problem, &graph)?;
                        self.shared
                            .full
                            .write()
                            .expect("memo lock")
                            .insert(graph.clone(), code.clone());
                        code
                    }
                };
                let i = self.intern(code);
                self.full.insert(graph, i);
                Ok(i)
            }
        }
    }

    fn intern(&mut self, code: CanonicalCode) -> usize {
        match self.slots.iter().position(|(c, _)| *c == code) {
            Some(i) => i,
            None => {
                self.slots.push((code, 0));
                self.slots.len() - 1
            }
        }
    }

    fn record(&mut self, sigma: &[u8], taus: &[(u8, u8)]) {
        if self.violation.is_some() {
            return;
        }
        match self.slot(sigma, taus) {
            Ok(i) => {
                self.slots[i].1 += 1;
                self.tuples += 1;
            }
            Err(e) => {
                let d = sigma.len();
                let taus: Vec<String> = taus
                    .iter()
                    .map(|&(a, b)| {
                        Permutation::transposition(d, a as usize, b as usize)
                            .unwrap()
                            .to_string()
                    })
                    .collect();
                let sigma =
                    Permutation::from_images(sigma.iter().map(|&x| x as usize).collect()).unwrap();
                self.violation = Some(format!("sigma_inf {sigma} taus [{}]: {e}", taus.join(", ")));
            }
        }
    }

    fn into_counts(self) -> (BTreeMap<CanonicalCode, u64>, u64, Option<String>) {
        let mut counts = BTreeMap::new();
        for (code, c) in self.slots {
            *counts.entry(code).or_insert(0) += c;
        }
        (counts, self.tuples, self.violation)
    }
}

type Partial = (BTreeMap<CanonicalCode, u64>, u64, Option<String>);

fn merge(mut a: Partial, b: Partial) -> Partial {
    for (k, v) in b.0 {
        *a.0.entry(k).or_insert(0) += v;
    }
    (a.0, a.1 + b.1, a.2.or(b.2))
}

/// Stabilizes a chain curve of genus-0 vertices and checks the outcome is
/// a trivalent graph of genus `g` with `n` legs.
fn checked_stabilization(problem: &HurwitzProblem, graph: &StableGraph) -> Result<CanonicalCode> {
    if graph.genera().iter().any(|&h| h != 0) {
        return Err(Error::InvariantViolation(
            "chain curve has an irrational component".into(),
        ));
    }
    if graph.genus() != problem.genus {
        return Err(Error::InvariantViolation(format!(
            "chain cover has genus {}, expected {}",
            graph.genus(),
            problem.genus
        )));
    }
    let order: Vec<usize> = (0..graph.vertex_count()).collect();
    let stable = stabilize_raw(graph, &order)?;
    if !stable.is_top_stratum()
        || stable.betti() as u32 != problem.genus
        || stable.leg_count() != problem.n()
    {
        return Err(Error::InvariantViolation(format!(
            "stabilization is not a top stratum of genus {}: {}",
            problem.genus,
            serde_json::to_string(&stable).unwrap_or_default()
        )));
    }
    Ok(stable.canonical_code())
}

fn expected_total(problem: &HurwitzProblem) -> Scalar {
    hurwitz::hurwitz_fast(problem).h_labeled
}

/// Degenerates every monodromy tuple of `problem` and accumulates the
/// stabilized graphs, each tuple weighing `#Aut(alpha) / d!`.
pub fn hurwitz_to_strata(
    problem: &HurwitzProblem,
    opts: StrataOptions,
) -> Result<StratumHistogram> {
    let shared = SharedMemo::default();
    let (counts, tuples, violation) = hurwitz::fold_tuples(
        problem,
        opts.budget,
        || Accumulator::new(problem, opts, &shared),
        |acc, view| acc.record(view.sigma_inf(), view.taus),
        Accumulator::into_counts,
        merge,
    )?
    .unwrap_or_default();
    if let Some(v) = violation {
        return Err(Error::InvariantViolation(v));
    }
    let weight = scalar::from_biguint(&aut_count(&problem.partition()))
        / scalar::from_biguint(&factorial(problem.d() as u64));
    finish(problem, opts.layout, counts, weight, tuples)
}

fn finish(
    problem: &HurwitzProblem,
    layout: ChainLayout,
    counts: BTreeMap<CanonicalCode, u64>,
    weight: Scalar,
    tuples: u64,
) -> Result<StratumHistogram> {
    let entries: BTreeMap<CanonicalCode, Scalar> = counts
        .into_iter()
        .map(|(k, c)| (k, scalar::from_biguint(&BigUint::from(c)) * &weight))
        .collect();
    let total = entries.values().cloned().sum();
    Ok(StratumHistogram {
        problem: problem.clone(),
        layout,
        entries,
        total,
        expected_total: expected_total(problem),
        tuples,
    })
}

/// Same histogram from the factorizations of a single `sigma_inf`. Sheet
/// relabeling acts on the tuples of a class with every leg labeling of the
/// equal-length cycles equally often, so each factorization contributes
/// `1/z_alpha` to the stratum of every such labeling.
pub fn hurwitz_to_strata_reduced(
    problem: &HurwitzProblem,
    opts: StrataOptions,
) -> Result<StratumHistogram> {
    let shared = SharedMemo::default();
    let mut acc = Accumulator::new(problem, opts, &shared);
    hurwitz::for_each_representative_tuple(problem, opts.budget, |view| {
        acc.record(view.sigma_inf(), view.taus)
    })?;
    let (counts, tuples, violation) = acc.into_counts();
    if let Some(v) = violation {
        return Err(Error::InvariantViolation(v));
    }
    let mut spread: BTreeMap<CanonicalCode, u64> = BTreeMap::new();
    for order in leg_labelings(&problem.alpha) {
        for (code, c) in &counts {
            *spread.entry(relabel_code(code, &order)).or_insert(0) += c;
        }
    }
    let z = problem.partition().centralizer_order();
    finish(
        problem,
        opts.layout,
        spread,
        Scalar::new(1.into(), z.into()),
        tuples,
    )
}

/// Permutations of `1..n` that only exchange labels of equal parts.
fn leg_labelings(alpha: &[u32]) -> Vec<Vec<u32>> {
    let n = alpha.len();
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(alpha: &[u32], cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
        let i = cur.len();
        if i == alpha.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..alpha.len() {
            if !used[j] && alpha[j] == alpha[i] {
                used[j] = true;
                cur.push(j as u32 + 1);
                go(alpha, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    go(alpha, &mut cur, &mut used, &mut out);
    out
}

/// Renames leg `i` to `order[i - 1]` and recanonicalizes.
fn relabel_code(code: &CanonicalCode, order: &[u32]) -> CanonicalCode {
    let g = code.to_graph();
    let edges = g.edges();
    let legs: Vec<(u32, usize)> = g
        .legs()
        .into_iter()
        .map(|(l, v)| (order[l as usize - 1], v))
        .collect();
    StableGraph::new(g.genera().to_vec(), &edges, &legs)
        .expect("relabeling keeps the graph valid")
        .canonical_code()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::enumerate_top_strata;
    use crate::symmetric::Permutation;
    use proptest::prelude::*;

    fn tuple(sigma: &str, taus: &[&str], d: usize) -> MonodromyTuple {
        MonodromyTuple {
            sigma_inf: Permutation::from_cycles(sigma, Some(d)).unwrap(),
            taus: taus
                .iter()
                .map(|t| Permutation::from_cycles(t, Some(d)).unwrap())
                .collect(),
        }
    }

    fn problem(g: u32, alpha: &[u32]) -> HurwitzProblem {
        HurwitzProblem::new(g, alpha.to_vec()).unwrap()
    }

    #[test]
    fn genus_one_double_cover() {
        let t = tuple("(1 2)", &["(1 2)", "(1 2)", "(1 2)"], 2);
        let c = cover_of_chain(&t, &[2]).unwrap();
        assert_eq!(c.vertices.len(), 3);
        assert!(c.vertices.iter().all(|v| v.genus == 0));
        let pairs: Vec<(usize, usize)> = c.edges.iter().map(|e| (e.from, e.to)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 1), (1, 2)]);
        assert_eq!(c.legs, vec![(1, 0)]);
        let s = stabilize(&c.to_graph().unwrap()).unwrap();
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.edge_count(), 1);
        assert!(s.is_top_stratum());

        let h = hurwitz_to_strata(&problem(1, &[2]), StrataOptions::default()).unwrap();
        assert_eq!(h.entries.len(), 1);
        assert_eq!(h.total, scalar::ratio(1, 2));
        assert!(h.matches());
    }

    #[test]
    fn trivial_chain() {
        let t = MonodromyTuple {
            sigma_inf: Permutation::identity(1),
            taus: Vec::new(),
        };
        let c = cover_of_chain(&t, &[1]).unwrap();
        assert_eq!(c.vertices.len(), 1);
        assert!(c.edges.is_empty());
        assert_eq!(c.legs, vec![(1, 0)]);
    }

    #[test]
    fn path_stabilizes_to_single_edge() {
        let g = StableGraph::new(
            vec![0, 0, 0],
            &[(0, 1), (1, 2)],
            &[(1, 0), (2, 0), (3, 2), (4, 2)],
        )
        .unwrap();
        let s = stabilize(&g).unwrap();
        let expected =
            StableGraph::new(vec![0, 0], &[(0, 1)], &[(1, 0), (2, 0), (3, 1), (4, 1)]).unwrap();
        assert!(s.is_isomorphic(&expected));
    }

    #[test]
    fn unstable_leftovers_are_errors() {
        let g = StableGraph::new(vec![0], &[], &[(1, 0), (2, 0)]).unwrap();
        assert!(matches!(stabilize(&g), Err(Error::UnstableCurve)));
    }

    #[test]
    fn small_histograms() {
        let h = hurwitz_to_strata(&problem(1, &[1]), StrataOptions::default()).unwrap();
        assert!(h.entries.is_empty());
        assert_eq!(h.total, scalar::int(0));
        assert!(h.matches());

        let h = hurwitz_to_strata(&problem(0, &[1, 1, 1]), StrataOptions::default()).unwrap();
        assert_eq!(h.entries.len(), 1);
        assert_eq!(h.total, scalar::int(24));
        assert!(h.matches());
    }

    #[test]
    fn strata_are_enumerated() {
        for (g, alpha) in [
            (0, vec![2, 1, 1]),
            (1, vec![2, 1]),
            (0, vec![3, 1, 1]),
            (2, vec![1]),
        ] {
            let p = problem(g, &alpha);
            let h = hurwitz_to_strata(&p, StrataOptions::default()).unwrap();
            assert!(h.matches(), "{g} {alpha:?}");
            let all: Vec<CanonicalCode> = enumerate_top_strata(g, p.n())
                .unwrap()
                .iter()
                .map(|s| s.canonical_code())
                .collect();
            assert!(h.entries.keys().all(|k| all.contains(k)));
        }
    }

    #[test]
    fn reduced_mode_agrees() {
        for (g, alpha) in [
            (0, vec![1, 1, 1]),
            (0, vec![2, 1, 1]),
            (1, vec![2, 2]),
            (1, vec![1, 1]),
            (0, vec![2, 2, 1]),
        ] {
            let p = problem(g, &alpha);
            let full = hurwitz_to_strata(&p, StrataOptions::default()).unwrap();
            let reduced = hurwitz_to_strata_reduced(&p, StrataOptions::default()).unwrap();
            assert_eq!(full.entries, reduced.entries, "{g} {alpha:?}");
        }
    }

    #[test]
    fn layouts_keep_the_total() {
        let p = problem(1, &[2, 1]);
        for layout in [ChainLayout::Forward, ChainLayout::Reversed] {
            let opts = StrataOptions {
                layout,
                ..Default::default()
            };
            let h = hurwitz_to_strata(&p, opts).unwrap();
            assert!(h.matches(), "{layout:?}");
        }
    }

    #[test]
    fn engines_agree() {
        for (g, alpha) in [
            (0, vec![2, 2, 1]),
            (1, vec![2, 1]),
            (0, vec![3, 1, 1]),
            (2, vec![2]),
            (1, vec![1, 1, 1]),
            (2, vec![1, 1]),
        ] {
            let p = problem(g, &alpha);
            for layout in [ChainLayout::Forward, ChainLayout::Reversed] {
                let run = |engine| {
                    hurwitz_to_strata(
                        &p,
                        StrataOptions {
                            layout,
                            engine,
                            ..Default::default()
                        },
                    )
                    .unwrap()
                };
                let (traced, full) = (run(Engine::Traced), run(Engine::Full));
                assert_eq!(traced.entries, full.entries, "{g} {alpha:?} {layout:?}");
                assert!(traced.matches());
            }
        }
    }

    #[test]
    fn histogram_json_shape() {
        let h = hurwitz_to_strata(&problem(1, &[2]), StrataOptions::default()).unwrap();
        let v = serde_json::to_value(&h).unwrap();
        assert_eq!(v["strata"][0]["weight"], "1/2");
        assert_eq!(v["total"], "1/2");
        assert_eq!(v["expected_total"], "1/2");
        assert_eq!(v["match"], true);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn stabilization_ignores_processing_order(seed in any::<u64>(), which in 0usize..4) {
            use rand::{rngs::StdRng, seq::SliceRandom, SeedableRng};
            let p = [problem(1, &[2, 1]), problem(0, &[2, 2, 1]), problem(2, &[2]), problem(1, &[3])][which].clone();
            let tuples = hurwitz::enumerate_tuples(&p, DEFAULT_BUDGET).unwrap();
            let mut rng = StdRng::seed_from_u64(seed);
            let t = tuples.choose(&mut rng).unwrap();
            let g = cover_of_chain(t, &p.alpha).unwrap().to_graph().unwrap();
            let mut order: Vec<usize> = (0..g.vertex_count()).collect();
            order.shuffle(&mut rng);
            prop_assert_eq!(stabilize_in_order(&g, &order).unwrap(), stabilize(&g).unwrap());
        }
    }
}
