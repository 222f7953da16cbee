//! Exhaustive enumeration of monodromy tuples.

use num_bigint::BigUint;
use rayon::prelude::*;

use super::{HurwitzValue, MonodromyTuple};
use crate::error::{Error, Result};
use crate::symmetric::{HurwitzProblem, Permutation};

/// Largest degree the oracle handles; points fit in a fixed array.
pub const MAX_ORACLE_DEGREE: usize = 12;

/// Default cap on the raw search size `(d(d-1)/2)^r`.
pub const DEFAULT_BUDGET: u128 = 2_000_000_000;

type Perm = [u8; MAX_ORACLE_DEGREE];

/// Borrowed view of one tuple during enumeration. `rhos[i]` is
/// `tau_i ∘ … ∘ tau_1 ∘ sigma_inf` as 0-based images, so `rhos[0]` is
/// `sigma_inf` and `rhos[r]` the identity.
pub struct TupleView<'a> {
    pub d: usize,
    pub taus: &'a [(u8, u8)],
    rhos: &'a [Perm],
}

impl TupleView<'_> {
    pub fn r(&self) -> usize {
        self.taus.len()
    }

    pub fn rho(&self, i: usize) -> &[u8] {
        &self.rhos[i][..self.d]
    }

    pub fn sigma_inf(&self) -> &[u8] {
        self.rho(0)
    }

    pub fn to_tuple(&self) -> MonodromyTuple {
        let d = self.d;
        MonodromyTuple {
            sigma_inf: Permutation::from_images(
                self.sigma_inf().iter().map(|&x| x as usize).collect(),
            )
            .expect("valid permutation"),
            taus: self
                .taus
                .iter()
                .map(|&(a, b)| Permutation::transposition(d, a as usize, b as usize).unwrap())
                .collect(),
        }
    }
}

/// `(d(d-1)/2)^r`, saturating.
pub fn search_size(problem: &HurwitzProblem) -> u128 {
    let d = problem.d() as u128;
    let t = d * d.saturating_sub(1) / 2;
    (0..problem.r()).fold(1u128, |acc, _| acc.saturating_mul(t))
}

fn check_budget(problem: &HurwitzProblem, budget: u128) -> Result<()> {
    let size = search_size(problem);
    if problem.d() > MAX_ORACLE_DEGREE || size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    Ok(())
}

/// All permutations of `0..d` with the given cycle type, in lexicographic
/// order of their image arrays.
fn conjugacy_class(d: usize, parts: &[u32]) -> Vec<Perm> {
    let mut target: Vec<u32> = parts.to_vec();
    target.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    let mut images: Vec<u8> = (0..d as u8).collect();
    loop {
        let mut lens = cycle_lengths(&images);
        lens.sort_unstable_by(|a, b| b.cmp(a));
        if lens == target {
            let mut p = [0u8; MAX_ORACLE_DEGREE];
            p[..d].copy_from_slice(&images);
            out.push(p);
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn cycle_lengths(images: &[u8]) -> Vec<u32> {
    let mut seen = [false; MAX_ORACLE_DEGREE];
    let mut out = Vec::new();
    for s in 0..images.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = images[x] as usize;
        }
        out.push(len);
    }
    out
}

fn cycle_count(images: &[u8]) -> usize {
    let mut seen = [false; MAX_ORACLE_DEGREE];
    let mut count = 0;
    for s in 0..images.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = images[x] as usize;
        }
    }
    count
}

fn identity_perm(d: usize) -> Perm {
    let mut p = [0u8; MAX_ORACLE_DEGREE];
    for (i, x) in p[..d].iter_mut().enumerate() {
        *x = i as u8;
    }
    p
}

fn transpositions(d: usize) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for a in 0..d as u8 {
        for b in a + 1..d as u8 {
            out.push((a, b));
        }
    }
    out
}

struct Search<'a, F> {
    d: usize,
    r: usize,
    trans: &'a [(u8, u8)],
    taus: Vec<(u8, u8)>,
    rhos: Vec<Perm>,
    // orbit labels of <sigma_inf, tau_1..tau_depth> and their count, per depth
    labels: Vec<(Perm, usize)>,
    visit: F,
}

fn merge_labels(labels: &Perm, count: usize, d: usize, a: u8, b: u8) -> (Perm, usize) {
    let (la, lb) = (labels[a as usize], labels[b as usize]);
    if la == lb {
        return (*labels, count);
    }
    let mut out = *labels;
    for x in out[..d].iter_mut() {
        if *x == lb {
            *x = la;
        }
    }
    (out, count - 1)
}

impl<F: FnMut(&TupleView<'_>)> Search<'_, F> {
    fn descend(&mut self, depth: usize, a: u8, b: u8, next: Perm) {
        let (labels, count) = self.labels[depth];
        let merged = merge_labels(&labels, count, self.d, a, b);
        // each later transposition joins at most two orbits
        if merged.1 - 1 > self.r - depth - 1 {
            return;
        }
        self.labels[depth + 1] = merged;
        self.rhos[depth + 1] = next;
        self.taus.push((a, b));
        self.dfs(depth + 1);
        self.taus.pop();
    }

    fn dfs(&mut self, depth: usize) {
        let d = self.d;
        if depth == self.r {
            if self.labels[depth].1 == 1 {
                (self.visit)(&TupleView {
                    d,
                    taus: &self.taus,
                    rhos: &self.rhos,
                });
            }
            return;
        }
        let remaining = self.r - depth - 1;
        if remaining == 0 {
            // the last transposition is forced: it must equal rho_{r-1}
            let cur = self.rhos[depth];
            let mut moved = [0u8; 2];
            let mut k = 0;
            for x in 0..d {
                if cur[x] as usize != x {
                    if k == 2 {
                        return;
                    }
                    moved[k] = x as u8;
                    k += 1;
                }
            }
            if k == 2 {
                self.descend(depth, moved[0], moved[1], identity_perm(d));
            }
            return;
        }
        for &(a, b) in self.trans {
            // left-multiplying by (a b) swaps the values a and b in the image array
            let mut next = self.rhos[depth];
            for x in next[..d].iter_mut() {
                if *x == a {
                    *x = b;
                } else if *x == b {
                    *x = a;
                }
            }
            // Cayley distance to the identity must be coverable
            if d - cycle_count(&next[..d]) > remaining {
                continue;
            }
            self.descend(depth, a, b, next);
        }
    }
}

fn search_from<F: FnMut(&TupleView<'_>)>(
    d: usize,
    r: usize,
    trans: &[(u8, u8)],
    sigma: &Perm,
    visit: F,
) {
    if d - cycle_count(&sigma[..d]) > r {
        return;
    }
    let mut labels = identity_perm(d);
    let mut count = d;
    for x in 0..d {
        (labels, count) = merge_labels(&labels, count, d, x as u8, sigma[x]);
    }
    let mut s = Search {
        d,
        r,
        trans,
        taus: Vec::with_capacity(r),
        rhos: vec![*sigma; r + 1],
        labels: vec![(labels, count); r + 1],
        visit,
    };
    s.dfs(0);
}

/// Streams every valid tuple to `visit`, in lexicographic order of
/// (`sigma_inf` images, `tau_1`, …, `tau_r`), transpositions ordered by
/// (min point, max point).
pub fn for_each_tuple<F: FnMut(&TupleView<'_>)>(
    problem: &HurwitzProblem,
    budget: u128,
    mut visit: F,
) -> Result<()> {
    check_budget(problem, budget)?;
    let (d, r) = (problem.d(), problem.r());
    let trans = transpositions(d);
    for sigma in conjugacy_class(d, &problem.alpha) {
        search_from(d, r, &trans, &sigma, &mut visit);
    }
    Ok(())
}

/// Parallel map-reduce over all valid tuples. Work is split by `sigma_inf`;
/// partial results are combined in class order, so the result does not
/// depend on the thread count as long as `merge` is associative.
pub(crate) fn fold_tuples<A, B, I, V, F, M>(
    problem: &HurwitzProblem,
    budget: u128,
    init: I,
    visit: V,
    finish: F,
    merge: M,
) -> Result<Option<B>>
where
    B: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &TupleView<'_>) + Sync,
    F: Fn(A) -> B + Sync,
    M: Fn(B, B) -> B,
{
    check_budget(problem, budget)?;
    let (d, r) = (problem.d(), problem.r());
    let trans = transpositions(d);
    let class = conjugacy_class(d, &problem.alpha);
    let parts: Vec<B> = class
        .par_iter()
        .map(|sigma| {
            let mut acc = init();
            search_from(d, r, &trans, sigma, |t| visit(&mut acc, t));
            finish(acc)
        })
        .collect();
    Ok(parts.into_iter().reduce(merge))
}

/// Sequential walk over the factorizations of one fixed `sigma_inf`, the
/// least element of the class.
pub(crate) fn for_each_representative_tuple<F: FnMut(&TupleView<'_>)>(
    problem: &HurwitzProblem,
    budget: u128,
    visit: F,
) -> Result<()> {
    check_budget(problem, budget)?;
    let (d, r) = (problem.d(), problem.r());
    let trans = transpositions(d);
    let sigma = conjugacy_class(d, &problem.alpha)[0];
    search_from(d, r, &trans, &sigma, visit);
    Ok(())
}

/// Every valid tuple, materialized.
pub fn enumerate_tuples(problem: &HurwitzProblem, budget: u128) -> Result<Vec<MonodromyTuple>> {
    let mut out = Vec::new();
    for_each_tuple(problem, budget, |t| out.push(t.to_tuple()))?;
    Ok(out)
}

pub fn hurwitz_brute(problem: &HurwitzProblem) -> Result<HurwitzValue> {
    hurwitz_brute_with(problem, DEFAULT_BUDGET)
}

pub fn hurwitz_brute_with(problem: &HurwitzProblem, budget: u128) -> Result<HurwitzValue> {
    let count = fold_tuples(
        problem,
        budget,
        || 0u64,
        |c, _| *c += 1,
        |c| c,
        |a, b| a + b,
    )?
    .unwrap_or(0);
    Ok(HurwitzValue::from_tuple_count(
        problem,
        BigUint::from(count),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn brute(g: u32, alpha: &[u32]) -> HurwitzValue {
        hurwitz_brute(&HurwitzProblem::new(g, alpha.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(brute(1, &[1]).h, int(0));
        let v = brute(1, &[2]);
        assert_eq!(v.tuple_count, BigUint::from(1u32));
        assert_eq!(v.h, ratio(1, 2));
        let v = brute(0, &[1, 1, 1]);
        assert_eq!(v.tuple_count, BigUint::from(24u32));
        assert_eq!(v.h, int(4));
        assert_eq!(v.h_labeled, int(24));
        assert_eq!(brute(1, &[3]).h, int(9));
        // 8 factorizations of each of the 3 transpositions sigma_inf: 24 / 3! = 4
        let v = brute(0, &[2, 1]);
        assert_eq!(v.tuple_count, BigUint::from(24u32));
        assert_eq!(v.h, int(4));
    }

    #[test]
    fn intransitive_tuples_are_rejected() {
        // g=0, (1,1,1): 27 product-one sequences of 4 transpositions, 3 of them
        // generate a group fixing a point.
        let p = HurwitzProblem::new(0, vec![1, 1, 1]).unwrap();
        let trans = transpositions(3);
        let mut all = 0;
        let sigma = conjugacy_class(3, &[1, 1, 1])[0];
        // count without the transitivity filter by brute product check
        for a in &trans {
            for b in &trans {
                for c in &trans {
                    for e in &trans {
                        let mut img = sigma;
                        for &(x, y) in [a, b, c, e] {
                            for v in img[..3].iter_mut() {
                                if *v == x {
                                    *v = y;
                                } else if *v == y {
                                    *v = x;
                                }
                            }
                        }
                        if img[..3] == [0, 1, 2] {
                            all += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(all, 27);
        assert_eq!(enumerate_tuples(&p, DEFAULT_BUDGET).unwrap().len(), 24);
    }

    #[test]
    fn enumeration_is_ordered_and_valid() {
        let p = HurwitzProblem::new(0, vec![2, 1]).unwrap();
        let tuples = enumerate_tuples(&p, DEFAULT_BUDGET).unwrap();
        assert_eq!(tuples.len(), 24);
        assert!(tuples.iter().all(MonodromyTuple::is_valid));
        let key = |t: &MonodromyTuple| {
            let mut k = vec![t.sigma_inf.images().to_vec()];
            k.extend(t.taus.iter().map(|x| {
                let (a, b) = x.as_transposition().unwrap();
                vec![a, b]
            }));
            k
        };
        assert!(tuples.windows(2).all(|w| key(&w[0]) < key(&w[1])));
        assert_eq!(
            enumerate_tuples(&HurwitzProblem::new(1, vec![2]).unwrap(), DEFAULT_BUDGET)
                .unwrap()
                .len(),
            1
        );
        assert!(
            enumerate_tuples(&HurwitzProblem::new(1, vec![1]).unwrap(), DEFAULT_BUDGET)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn budget_is_enforced() {
        let p = HurwitzProblem::new(3, vec![6]).unwrap();
        assert!(matches!(
            hurwitz_brute_with(&p, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn class_sizes() {
        assert_eq!(conjugacy_class(4, &[2, 2]).len(), 3);
        assert_eq!(conjugacy_class(5, &[5]).len(), 24);
        assert_eq!(conjugacy_class(1, &[1]).len(), 1);
    }
}
