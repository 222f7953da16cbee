//! Partitions, permutations and cycle types.
//!
//! Points are `1..=d` in every external form (cycle notation, JSON image
//! arrays); internally a permutation stores 0-based images. Composition is
//! right-to-left: `compose(p, q)` applies `q` first, then `p`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::factorial;

/// An integer partition, parts sorted non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// part -> multiplicity
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// Size of the centralizer of a permutation with this cycle type,
    /// `prod_m m^{k_m} k_m!`.
    pub fn centralizer_order(&self) -> BigUint {
        self.multiplicities()
            .into_iter()
            .fold(BigUint::one(), |acc, (part, k)| {
                acc * BigUint::from(part).pow(k as u32) * factorial(k as u64)
            })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Partition::new(Vec::deserialize(d)?).map_err(de::Error::custom)
    }
}

/// `#Aut(alpha)`: the product of the factorials of the part multiplicities.
pub fn aut_count(alpha: &Partition) -> BigUint {
    alpha
        .multiplicities()
        .values()
        .fold(BigUint::one(), |acc, &k| acc * factorial(k as u64))
}

/// A permutation of `{1..d}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based images, the JSON form.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(
                "point 0 in 1-based images".into(),
            ));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    /// The transposition exchanging 0-based points `a` and `b`.
    pub fn transposition(d: usize, a: usize, b: usize) -> Result<Self> {
        if a == b || a >= d || b >= d {
            return Err(Error::InvalidPermutation(format!(
                "bad transposition ({a} {b}) in degree {d}"
            )));
        }
        let mut images: Vec<usize> = (0..d).collect();
        images.swap(a, b);
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(1 2)(3)"`; points not mentioned are
    /// fixed. `degree` defaults to the largest point named.
    pub fn from_cycles(s: &str, degree: Option<usize>) -> Result<Self> {
        let bad = |why: &str| Error::InvalidPermutation(format!("{s:?}: {why}"));
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let cycle = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad("not a point")))
                .collect::<Result<Vec<_>>>()?;
            if cycle.contains(&0) {
                return Err(bad("points are 1-based"));
            }
            cycles.push(cycle);
            rest = body[close + 1..].trim_start();
        }
        let max = cycles.iter().flatten().copied().max().unwrap_or(0);
        let d = degree.unwrap_or(max);
        if max > d {
            return Err(bad("point exceeds degree"));
        }
        let mut images: Vec<usize> = (0..d).collect();
        let mut seen = vec![false; d];
        for c in &cycles {
            for (i, &x) in c.iter().enumerate() {
                if seen[x - 1] {
                    return Err(bad("point repeated"));
                }
                seen[x - 1] = true;
                images[x - 1] = c[(i + 1) % c.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of 0-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// Cycles as 0-based point lists, each starting at its smallest point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.images.len();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Returns the pair of 0-based points if this is a transposition.
    pub fn as_transposition(&self) -> Option<(usize, usize)> {
        let moved: Vec<usize> = (0..self.degree())
            .filter(|&i| self.images[i] != i)
            .collect();
        match moved[..] {
            [a, b] => Some((a, b)),
            _ => None,
        }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with fixed points, e.g. `(1 2)(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.is_empty() {
            return write!(f, "()");
        }
        for c in self.cycles() {
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Permutation::from_cycles(s, None)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        Permutation::from_one_based(&v).map_err(de::Error::custom)
    }
}

/// `p ∘ q`: apply `q`, then `p`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(Permutation {
        images: q.images.iter().map(|&x| p.images[x]).collect(),
    })
}

pub fn cycle_type(p: &Permutation) -> Partition {
    if p.degree() == 0 {
        return Partition { parts: Vec::new() };
    }
    let parts = p.cycles().iter().map(|c| c.len() as u32).collect();
    Partition::new(parts).expect("cycle lengths are positive")
}

/// Disjoint-set forest over `0..n` with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }
}

/// Whether `<gens>` acts transitively on `{1..d}`.
pub fn is_transitive(gens: &[Permutation], d: usize) -> Result<bool> {
    let mut uf = UnionFind::new(d);
    for g in gens {
        if g.degree() != d {
            return Err(Error::DegreeMismatch(g.degree(), d));
        }
        for (x, &y) in g.images.iter().enumerate() {
            uf.union(x, y);
        }
    }
    Ok(d == 0 || uf.set_count() == 1)
}

/// One Hurwitz counting problem: genus `g` and a labeled profile over
/// infinity. The parts keep the caller's order; [`HurwitzProblem::partition`]
/// gives the canonical sorted form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HurwitzProblem {
    pub genus: u32,
    pub alpha: Vec<u32>,
}

impl HurwitzProblem {
    pub fn new(genus: u32, alpha: Vec<u32>) -> Result<Self> {
        Partition::new(alpha.clone())?;
        Ok(HurwitzProblem { genus, alpha })
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.alpha.clone()).expect("validated at construction")
    }

    pub fn d(&self) -> usize {
        self.alpha.iter().sum::<u32>() as usize
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// Number of simple branch points, `d + n + 2g - 2` by Riemann-Hurwitz.
    pub fn r(&self) -> usize {
        self.d() + self.n() + 2 * self.genus as usize - 2
    }

    pub fn is_stable(&self) -> bool {
        is_stable(self.genus, self.n())
    }
}

/// `2g - 2 + n > 0`.
pub fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// Parses `"2,1,1"` into a part list.
pub fn parse_alpha(s: &str) -> Result<Vec<u32>> {
    let parts = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidPartition(format!("{s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::new(parts.clone())?;
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(s: &str, d: usize) -> Permutation {
        Permutation::from_cycles(s, Some(d)).unwrap()
    }

    #[test]
    fn compose_examples() {
        let q = perm("(1 3 2)", 3);
        assert_eq!(compose(&Permutation::identity(3), &q).unwrap(), q);
        let t = perm("(1 2)", 2);
        assert!(compose(&t, &t).unwrap().is_identity());
        // (12)∘(23): 1->1->2, 2->3->3, 3->2->1
        let c = compose(&perm("(1 2)", 3), &perm("(2 3)", 3)).unwrap();
        assert_eq!(c.one_based(), vec![2, 3, 1]);
        assert_eq!(c.to_string(), "(1 2 3)");
        assert!(matches!(
            compose(&perm("(1 2)", 2), &perm("(1 2)", 3)),
            Err(Error::DegreeMismatch(2, 3))
        ));
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(cycle_type(&Permutation::identity(3)).parts(), &[1, 1, 1]);
        assert_eq!(cycle_type(&perm("(1 2)", 3)).parts(), &[2, 1]);
        let c = compose(&perm("(1 2)", 3), &perm("(2 3)", 3)).unwrap();
        assert_eq!(cycle_type(&c).parts(), &[3]);
    }

    #[test]
    fn transitivity_examples() {
        assert!(is_transitive(&[Permutation::identity(1)], 1).unwrap());
        assert!(!is_transitive(&[perm("(1 2)", 3)], 3).unwrap());
        assert!(is_transitive(&[perm("(1 2)", 3), perm("(2 3)", 3)], 3).unwrap());
    }

    #[test]
    fn aut_examples() {
        let a = |v: Vec<u32>| aut_count(&Partition::new(v).unwrap());
        assert_eq!(a(vec![2, 1]), BigUint::from(1u32));
        assert_eq!(a(vec![1, 1, 1]), BigUint::from(6u32));
        assert_eq!(a(vec![2, 2, 1, 1, 1]), BigUint::from(12u32));
    }

    #[test]
    fn cycle_notation_roundtrip() {
        let p = perm("(1 2)(3)", 3);
        assert_eq!(p.to_string(), "(1 2)(3)");
        assert_eq!(
            "(2 4)".parse::<Permutation>().unwrap().to_string(),
            "(1)(2 4)(3)"
        );
        assert!(Permutation::from_cycles("(1 1)", None).is_err());
        assert!(Permutation::from_cycles("(0 1)", None).is_err());
        assert!(Permutation::from_cycles("1 2", None).is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[2,1,3]");
        assert_eq!(serde_json::from_str::<Permutation>(&json).unwrap(), p);
    }

    #[test]
    fn partitions_validate() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 0]).is_err());
        assert_eq!(Partition::new(vec![1, 3, 2]).unwrap().parts(), &[3, 2, 1]);
        assert_eq!(parse_alpha("1, 1,1").unwrap(), vec![1, 1, 1]);
        assert!(parse_alpha("1,x").is_err());
        assert_eq!(HurwitzProblem::new(1, vec![2]).unwrap().r(), 3);
        assert_eq!(HurwitzProblem::new(0, vec![1, 1, 1]).unwrap().r(), 4);
    }

    fn arb_perm(max_d: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_d)
            .prop_flat_map(|d| Just((0..d).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    fn arb_pair(max_d: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
        (1..=max_d).prop_flat_map(|d| {
            let v: Vec<usize> = (0..d).collect();
            (Just(v.clone()).prop_shuffle(), Just(v).prop_shuffle()).prop_map(|(a, b)| {
                (
                    Permutation::from_images(a).unwrap(),
                    Permutation::from_images(b).unwrap(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn inverse_cancels(p in arb_perm(9)) {
            let e = compose(&p, &p.inverse()).unwrap();
            prop_assert!(cycle_type(&e).parts().iter().all(|&x| x == 1));
        }

        #[test]
        fn cycle_type_conjugation_invariant((p, q) in arb_pair(9)) {
            let c = compose(&compose(&q, &p).unwrap(), &q.inverse()).unwrap();
            prop_assert_eq!(cycle_type(&c), cycle_type(&p));
        }

        #[test]
        fn transitivity_conjugation_invariant(
            (p, q, r) in (1usize..=7).prop_flat_map(|d| {
                let v: Vec<usize> = (0..d).collect();
                (Just(v.clone()).prop_shuffle(), Just(v.clone()).prop_shuffle(), Just(v).prop_shuffle())
            }).prop_map(|(a, b, c)| (
                Permutation::from_images(a).unwrap(),
                Permutation::from_images(b).unwrap(),
                Permutation::from_images(c).unwrap(),
            ))
        ) {
            let d = p.degree();
            let conj = |x: &Permutation| compose(&compose(&q, x).unwrap(), &q.inverse()).unwrap();
            let gens = vec![p.clone(), r.clone()];
            let conj_gens: Vec<_> = gens.iter().map(conj).collect();
            prop_assert_eq!(is_transitive(&gens, d).unwrap(), is_transitive(&conj_gens, d).unwrap());
        }

        #[test]
        fn aut_divides_n_factorial(parts in proptest::collection::vec(1u32..5, 1..8)) {
            let alpha = Partition::new(parts).unwrap();
            let nf = factorial(alpha.len() as u64);
            prop_assert_eq!(nf % aut_count(&alpha), BigUint::from(0u32));
        }
    }
}
