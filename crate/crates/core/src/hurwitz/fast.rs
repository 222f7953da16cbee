//! Class-algebra recursion for Hurwitz numbers.
//!
//! For a fixed permutation of cycle type `mu`, the number of transposition
//! sequences `tau_1..tau_r` with `tau_r ∘ … ∘ tau_1 ∘ sigma = id` depends only
//! on `mu`. Left-multiplying by a transposition either joins two cycles or
//! cuts one, so the counts propagate over cycle types with the classical
//! cut-and-join weights. That gives the possibly disconnected count; the
//! connected count is then peeled off by splitting the parts of `mu` into
//! the orbit containing the first part and the rest.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::HurwitzValue;
use crate::scalar::{binomial, factorial};
use crate::symmetric::{HurwitzProblem, Partition};

type Cycles = Vec<u32>;

fn canonical(mut parts: Cycles) -> Cycles {
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Cut-and-join successors of a cycle type with the number of transpositions
/// realizing each.
fn successors(mu: &[u32]) -> Vec<(Cycles, u64)> {
    let mut mult: Vec<(u32, u64)> = Vec::new();
    for &p in mu {
        match mult.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => mult.push((p, 1)),
        }
    }
    let remove = |parts: &[u32], drop: &[u32]| {
        let mut v = parts.to_vec();
        for x in drop {
            let i = v.iter().position(|y| y == x).unwrap();
            v.remove(i);
        }
        v
    };
    let mut out = Vec::new();
    // join two distinct cycles
    for (i, &(a, ka)) in mult.iter().enumerate() {
        if ka >= 2 {
            let w = (a as u64) * (a as u64) * ka * (ka - 1) / 2;
            let mut v = remove(mu, &[a, a]);
            v.push(2 * a);
            out.push((canonical(v), w));
        }
        for &(b, kb) in &mult[i + 1..] {
            let w = (a as u64) * (b as u64) * ka * kb;
            let mut v = remove(mu, &[a, b]);
            v.push(a + b);
            out.push((canonical(v), w));
        }
    }
    // cut one cycle into j and c - j
    for &(c, kc) in &mult {
        for j in 1..=c / 2 {
            let w = if 2 * j == c {
                (c as u64 / 2) * kc
            } else {
                c as u64 * kc
            };
            let mut v = remove(mu, &[c]);
            v.push(j);
            v.push(c - j);
            out.push((canonical(v), w));
        }
    }
    out
}

/// Memoized counts shared across many Hurwitz evaluations.
#[derive(Default)]
pub struct FactorizationCounter {
    // cycle type -> [count of product-identity sequences of length 0, 1, ..]
    disconnected: HashMap<Cycles, Vec<BigUint>>,
    connected: HashMap<(Cycles, usize), BigUint>,
    transitions: HashMap<Cycles, Vec<(Cycles, u64)>>,
}

impl FactorizationCounter {
    pub fn new() -> Self {
        Self::default()
    }

    fn step_table(&mut self, mu: &Cycles) -> Vec<(Cycles, u64)> {
        if let Some(t) = self.transitions.get(mu) {
            return t.clone();
        }
        let t = successors(mu);
        self.transitions.insert(mu.clone(), t.clone());
        t
    }

    /// Sequences of `r` transpositions whose product with a fixed permutation
    /// of cycle type `parts` is the identity. No transitivity requirement.
    pub fn disconnected(&mut self, parts: &[u32], r: usize) -> BigUint {
        let mu = canonical(parts.to_vec());
        if mu.is_empty() {
            return if r == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if let Some(v) = self.disconnected.get(&mu) {
            if let Some(x) = v.get(r) {
                return x.clone();
            }
        }
        let d: u32 = mu.iter().sum();
        let identity = vec![1u32; d as usize];
        let mut counts = Vec::with_capacity(r + 1);
        let mut state: HashMap<Cycles, BigUint> = HashMap::new();
        state.insert(mu.clone(), BigUint::one());
        for step in 0..=r {
            counts.push(state.get(&identity).cloned().unwrap_or_default());
            if step == r {
                break;
            }
            let mut next: HashMap<Cycles, BigUint> = HashMap::new();
            for (nu, c) in &state {
                for (succ, w) in self.step_table(nu) {
                    *next.entry(succ).or_default() += c * w;
                }
            }
            state = next;
        }
        let out = counts[r].clone();
        self.disconnected.insert(mu, counts);
        out
    }

    /// As [`Self::disconnected`], restricted to sequences generating a
    /// transitive group together with the fixed permutation.
    pub fn connected(&mut self, parts: &[u32], r: usize) -> BigUint {
        let mu = canonical(parts.to_vec());
        let key = (mu.clone(), r);
        if let Some(x) = self.connected.get(&key) {
            return x.clone();
        }
        let total = self.disconnected(&mu, r);
        let n = mu.len();
        let others = n - 1;
        let mut split = BigUint::zero();
        // the orbit containing part 0 takes part 0 plus a proper subset of the rest
        for mask in 0u32..(1u32 << others) {
            if mask.count_ones() as usize == others {
                continue;
            }
            let mut block = vec![mu[0]];
            let mut rest = Vec::new();
            for (i, &p) in mu[1..].iter().enumerate() {
                if mask & (1 << i) != 0 {
                    block.push(p);
                } else {
                    rest.push(p);
                }
            }
            let db: usize = block.iter().map(|&x| x as usize).sum();
            // r_B = d_B + n_B + 2 g_B - 2 for g_B = 0, 1, ...
            let mut rb = db + block.len() - 2;
            while rb <= r {
                let c = self.connected(&block, rb);
                if !c.is_zero() {
                    let rest_count = self.disconnected(&rest, r - rb);
                    split += binomial(r as u64, rb as u64) * c * rest_count;
                }
                rb += 2;
            }
        }
        assert!(
            split <= total,
            "connected extraction went negative for {mu:?}, r = {r}"
        );
        let out = total - split;
        self.connected.insert(key, out.clone());
        out
    }

    pub fn hurwitz(&mut self, problem: &HurwitzProblem) -> HurwitzValue {
        let connected = self.connected(&problem.alpha, problem.r());
        // |C_alpha| = d! / z_alpha sigma's, each with `connected` factorizations
        let class_size = factorial(problem.d() as u64) / problem.partition().centralizer_order();
        HurwitzValue::from_tuple_count(problem, connected * class_size)
    }
}

pub fn hurwitz_fast(problem: &HurwitzProblem) -> HurwitzValue {
    FactorizationCounter::new().hurwitz(problem)
}

pub fn disconnected_factorizations(parts: &Partition, r: usize) -> BigUint {
    FactorizationCounter::new().disconnected(parts.parts(), r)
}

pub fn connected_factorizations(parts: &Partition, r: usize) -> BigUint {
    FactorizationCounter::new().connected(parts.parts(), r)
}
