//! Both sides of the ELSV formula and the recovery of linear Hodge
//! integrals from Hurwitz numbers.
//!
//! For fixed stable `(g, n)` the scaled Hurwitz value
//!
//! ```text
//! P(alpha) = 1/r! · prod alpha_i! / alpha_i^alpha_i · #Aut(alpha) · H^g_alpha
//! ```
//!
//! is a symmetric polynomial in `alpha_1..alpha_n`:
//! `P = sum_k (-1)^k sum_a <psi^a lambda_k> m_a(alpha)` over exponent
//! multisets `a` with `|a| + k = 3g - 3 + n`, where `m_a` is the monomial
//! symmetric function. Evaluating `P` at enough integer points and solving
//! exactly yields every `<psi^a lambda_k>_{g,n}`.

mod cache;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::{FactorizationCounter, HurwitzValue};
use crate::linalg::{self, IncrementalBasis, SolveError};
use crate::scalar::{self, factorial, Scalar};
use crate::symmetric::{aut_count, is_stable, HurwitzProblem};

pub use cache::{default_cache_path, HodgeCache, CACHE_ENV, CACHE_SCHEMA};

/// `<psi_1^{a_1} … psi_n^{a_n} lambda_k>_{g,n}`, exponents stored as a
/// non-increasing multiset. Keys order by lambda index, then by exponents
/// descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HodgeIntegralKey {
    pub g: u32,
    pub n: usize,
    pub a: Vec<u32>,
    pub k: u32,
}

impl HodgeIntegralKey {
    pub fn new(g: u32, n: usize, mut a: Vec<u32>, k: u32) -> Result<Self> {
        if !is_stable(g, n) {
            return Err(Error::Unstable { g, n });
        }
        if a.len() != n {
            return Err(Error::InvariantViolation(format!(
                "{} exponents for n = {n}",
                a.len()
            )));
        }
        let dim = 3 * g as i64 - 3 + n as i64;
        if a.iter().map(|&x| x as i64).sum::<i64>() + k as i64 != dim || k > g {
            return Err(Error::InvariantViolation(format!(
                "psi^{a:?} lambda_{k} is not a top class on M_{{{g},{n}}}"
            )));
        }
        a.sort_unstable_by(|x, y| y.cmp(x));
        Ok(HodgeIntegralKey { g, n, a, k })
    }

    pub fn degree(&self) -> u32 {
        self.a.iter().sum()
    }

    /// `(-1)^k`
    pub fn sign(&self) -> i64 {
        if self.k % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl Ord for HodgeIntegralKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.g, self.n, self.k, &other.a).cmp(&(other.g, other.n, other.k, &self.a))
    }
}

impl PartialOrd for HodgeIntegralKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HodgeIntegralKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        let mut first = true;
        for (i, &e) in self.a.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "psi_{}", i + 1)?;
            } else {
                write!(f, "psi_{}^{e}", i + 1)?;
            }
        }
        if self.k > 0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "lambda_{}", self.k)?;
        }
        if first {
            write!(f, "1")?;
        }
        write!(f, ">_{{{},{}}}", self.g, self.n)
    }
}

/// Exact values of linear Hodge integrals for one `(g, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HodgeTable {
    pub entries: BTreeMap<HodgeIntegralKey, Scalar>,
}

#[derive(Serialize, Deserialize)]
struct HodgeRow {
    g: u32,
    n: usize,
    a: Vec<u32>,
    k: u32,
    #[serde(with = "scalar::serde_str")]
    value: Scalar,
}

impl Serialize for HodgeTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<HodgeRow> = self
            .entries
            .iter()
            .map(|(k, v)| HodgeRow {
                g: k.g,
                n: k.n,
                a: k.a.clone(),
                k: k.k,
                value: v.clone(),
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HodgeTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<HodgeRow>::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for r in rows {
            let key =
                HodgeIntegralKey::new(r.g, r.n, r.a, r.k).map_err(serde::de::Error::custom)?;
            entries.insert(key, r.value);
        }
        Ok(HodgeTable { entries })
    }
}

impl HodgeTable {
    pub fn get(&self, a: &[u32], k: u32) -> Option<&Scalar> {
        let mut a = a.to_vec();
        a.sort_unstable_by(|x, y| y.cmp(x));
        self.entries
            .iter()
            .find(|(key, _)| key.a == a && key.k == k)
            .map(|(_, v)| v)
    }

    /// The polynomial `P_{g,n}` evaluated at `alpha`.
    pub fn evaluate(&self, alpha: &[u32]) -> Scalar {
        self.entries
            .iter()
            .map(|(key, v)| v * monomial_symmetric(&key.a, alpha) * scalar::int(key.sign()))
            .sum()
    }
}

/// `m_a(alpha)`: the sum over distinct rearrangements `b` of `a` of
/// `prod alpha_i^{b_i}`.
pub fn monomial_symmetric(a: &[u32], alpha: &[u32]) -> Scalar {
    assert_eq!(
        a.len(),
        alpha.len(),
        "exponent count must match point arity"
    );
    let mut exps = a.to_vec();
    exps.sort_unstable();
    let mut total = BigInt::zero();
    loop {
        let term = exps
            .iter()
            .zip(alpha)
            .fold(BigInt::one(), |acc, (&e, &x)| acc * BigInt::from(x).pow(e));
        total += term;
        if !next_multiset_permutation(&mut exps) {
            break;
        }
    }
    Scalar::from_integer(total)
}

fn next_multiset_permutation(v: &mut [u32]) -> bool {
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

/// Non-increasing sequences of `n` non-negative integers summing to `total`,
/// in decreasing lexicographic order.
pub fn exponent_multisets(total: u32, n: usize) -> Vec<Vec<u32>> {
    fn go(rest: u32, slots: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in (0..=rest.min(max)).rev() {
            // the remaining slots can hold at most x each
            if (x as u64) * (slots as u64) < rest as u64 {
                break;
            }
            cur.push(x);
            go(rest - x, slots - 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, n, total, &mut Vec::new(), &mut out);
    out
}

/// The unknowns of `P_{g,n}`: one key per exponent multiset and lambda index.
pub fn polynomial_model(g: u32, n: usize) -> Result<Vec<HodgeIntegralKey>> {
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let dim = 3 * g + n as u32 - 3;
    let mut keys = Vec::new();
    for k in 0..=g {
        for a in exponent_multisets(dim - k, n) {
            keys.push(HodgeIntegralKey { g, n, a, k });
        }
    }
    Ok(keys)
}

/// `1/r! · prod alpha_i!/alpha_i^{alpha_i} · h_labeled`.
pub fn scaled_from_value(value: &HurwitzValue) -> Scalar {
    let p = &value.problem;
    let mut x = value.h_labeled.clone() / scalar::from_biguint(&factorial(p.r() as u64));
    for &a in &p.alpha {
        x *= scalar::from_biguint(&factorial(a as u64));
        x /= Scalar::from_integer(BigInt::from(a).pow(a));
    }
    x
}

/// `P_{g,n}(alpha)` computed from Hurwitz data.
pub fn scaled_hurwitz(problem: &HurwitzProblem) -> Result<Scalar> {
    scaled_hurwitz_with(problem, &mut FactorizationCounter::new())
}

pub(crate) fn scaled_hurwitz_with(
    problem: &HurwitzProblem,
    counter: &mut FactorizationCounter,
) -> Result<Scalar> {
    if !problem.is_stable() {
        return Err(Error::Unstable {
            g: problem.genus,
            n: problem.n(),
        });
    }
    Ok(scaled_from_value(&counter.hurwitz(problem)))
}

/// Result of fitting a symmetric polynomial to point values.
#[derive(Debug, Clone)]
pub struct SymmetricFit {
    /// Exponent multisets of the basis, in input order.
    pub basis: Vec<Vec<u32>>,
    /// Coefficient of `m_a` for each basis element.
    pub coefficients: Vec<Scalar>,
    /// Points whose rows formed the square system.
    pub solving_points: Vec<Vec<u32>>,
    /// Points checked against the solution but not used to find it.
    pub held_out_points: Vec<Vec<u32>>,
}

/// Fits `sum_j c_j m_{basis_j}` to the given values, selecting independent
/// rows in input order, then checks every point.
pub fn fit_symmetric(basis: &[Vec<u32>], points: &[(Vec<u32>, Scalar)]) -> Result<SymmetricFit> {
    fit_or_check(basis, points, None)
}

/// With `known` coefficients the linear solve is skipped; row selection and
/// the check of every point still run, so the outcome is the same as a fit.
fn fit_or_check(
    basis: &[Vec<u32>],
    points: &[(Vec<u32>, Scalar)],
    known: Option<Vec<Scalar>>,
) -> Result<SymmetricFit> {
    let rows: Vec<Vec<Scalar>> = points
        .iter()
        .map(|(alpha, _)| basis.iter().map(|a| monomial_symmetric(a, alpha)).collect())
        .collect();
    let mut echelon = IncrementalBasis::new();
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if echelon.rank() == basis.len() {
            break;
        }
        if echelon.push(row) {
            chosen.push(i);
        }
    }
    if echelon.rank() < basis.len() {
        return Err(Error::InsufficientGrid {
            rank: echelon.rank(),
            unknowns: basis.len(),
        });
    }
    let coefficients = match known {
        Some(c) => c,
        None => {
            let a: Vec<Vec<Scalar>> = chosen.iter().map(|&i| rows[i].clone()).collect();
            let b: Vec<Scalar> = chosen.iter().map(|&i| points[i].1.clone()).collect();
            linalg::solve(&a, &b).map_err(|e| match e {
                SolveError::RankDeficient { rank } | SolveError::Inconsistent { rank } => {
                    Error::InsufficientGrid {
                        rank,
                        unknowns: basis.len(),
                    }
                }
            })?
        }
    };
    for (row, (alpha, value)) in rows.iter().zip(points) {
        let predicted: Scalar = row.iter().zip(&coefficients).map(|(x, c)| x * c).sum();
        if &predicted != value {
            return Err(Error::PolynomialityViolated {
                point: alpha.clone(),
                expected: scalar::format(value),
                predicted: scalar::format(&predicted),
            });
        }
    }
    let chosen_set: BTreeSet<usize> = chosen.iter().copied().collect();
    Ok(SymmetricFit {
        basis: basis.to_vec(),
        coefficients,
        solving_points: chosen.iter().map(|&i| points[i].0.clone()).collect(),
        held_out_points: (0..points.len())
            .filter(|i| !chosen_set.contains(i))
            .map(|i| points[i].0.clone())
            .collect(),
    })
}

/// A Hodge table together with the points that determined and checked it.
#[derive(Debug, Clone, Serialize)]
pub struct Interpolation {
    pub g: u32,
    pub n: usize,
    /// Largest part on the grid.
    pub max_part: u32,
    pub table: HodgeTable,
    pub solving_points: Vec<Vec<u32>>,
    pub held_out_points: Vec<Vec<u32>>,
}

/// Solves for the Hodge integrals of `(g, n)` from `P_{g,n}` values at the
/// given points (each a tuple of positive integers, any order).
pub fn interpolate_hodge(
    g: u32,
    n: usize,
    evaluations: &[(Vec<u32>, Scalar)],
) -> Result<Interpolation> {
    interpolate_or_check(g, n, evaluations, None)
}

fn interpolate_or_check(
    g: u32,
    n: usize,
    evaluations: &[(Vec<u32>, Scalar)],
    known: Option<&HodgeTable>,
) -> Result<Interpolation> {
    let keys = polynomial_model(g, n)?;
    let basis: Vec<Vec<u32>> = keys.iter().map(|k| k.a.clone()).collect();
    for (alpha, _) in evaluations {
        if alpha.len() != n || alpha.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "evaluation point {alpha:?} for n = {n}"
            )));
        }
    }
    let known = match known {
        Some(table) => {
            check_keys(g, n, table)?;
            Some(
                keys.iter()
                    .map(|k| &table.entries[k] * scalar::int(k.sign()))
                    .collect(),
            )
        }
        None => None,
    };
    let fit = fit_or_check(&basis, evaluations, known)?;
    let entries = keys
        .into_iter()
        .zip(fit.coefficients)
        .map(|(key, c)| {
            let v = c * scalar::int(key.sign());
            (key, v)
        })
        .collect();
    Ok(Interpolation {
        g,
        n,
        max_part: evaluations
            .iter()
            .flat_map(|(a, _)| a.iter().copied())
            .max()
            .unwrap_or(0),
        table: HodgeTable { entries },
        solving_points: fit.solving_points,
        held_out_points: fit.held_out_points,
    })
}

/// Non-increasing `n`-tuples with entries in `1..=max_part`, ordered by
/// total then lexicographically, so small degrees come first.
pub fn evaluation_grid(n: usize, max_part: u32) -> Vec<Vec<u32>> {
    fn go(slots: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            out.push(cur.clone());
            return;
        }
        for x in 1..=max {
            cur.push(x);
            go(slots - 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_part, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| (a.iter().sum::<u32>(), a).cmp(&(b.iter().sum::<u32>(), b)));
    out
}

/// Evaluates `P_{g,n}` on every point of `grid` through the fast Hurwitz path.
pub fn evaluate_grid(g: u32, grid: &[Vec<u32>]) -> Result<Vec<(Vec<u32>, Scalar)>> {
    let mut counter = FactorizationCounter::new();
    grid.iter()
        .map(|alpha| {
            let p = HurwitzProblem::new(g, alpha.clone())?;
            Ok((alpha.clone(), scaled_hurwitz_with(&p, &mut counter)?))
        })
        .collect()
}

/// Minimum number of held-out points demanded by [`auto_interpolate`].
pub const MIN_HELD_OUT: usize = 2;

/// Grows `max_part` from 1 until the grid, minus `exclude`, determines the
/// table with at least [`MIN_HELD_OUT`] points left over to check it.
pub fn auto_interpolate(g: u32, n: usize, exclude: &[Vec<u32>]) -> Result<Interpolation> {
    auto_interpolate_or_check(g, n, exclude, None)
}

/// Replays [`auto_interpolate`] with a table obtained elsewhere: same grid,
/// same point roles, every point checked against `table`.
pub fn auto_check(g: u32, n: usize, table: &HodgeTable) -> Result<Interpolation> {
    auto_interpolate_or_check(g, n, &[], Some(table))
}

fn auto_interpolate_or_check(
    g: u32,
    n: usize,
    exclude: &[Vec<u32>],
    known: Option<&HodgeTable>,
) -> Result<Interpolation> {
    let unknowns = polynomial_model(g, n)?.len();
    let excluded: BTreeSet<Vec<u32>> = exclude
        .iter()
        .map(|a| {
            let mut a = a.clone();
            a.sort_unstable_by(|x, y| y.cmp(x));
            a
        })
        .collect();
    let mut max_part = 1;
    loop {
        let grid: Vec<Vec<u32>> = evaluation_grid(n, max_part)
            .into_iter()
            .filter(|a| !excluded.contains(a))
            .collect();
        if grid.len() >= unknowns + MIN_HELD_OUT {
            let evals = evaluate_grid(g, &grid)?;
            match interpolate_or_check(g, n, &evals, known) {
                Ok(interp) if interp.held_out_points.len() >= MIN_HELD_OUT => {
                    return Ok(Interpolation { max_part, ..interp })
                }
                Ok(_) | Err(Error::InsufficientGrid { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        max_part += 1;
        if max_part > 64 {
            return Err(Error::InsufficientGrid { rank: 0, unknowns });
        }
    }
}

/// A fit of `P_{g,n}` over every monomial of degree `low..=high`, a window
/// wider than the one the Hodge integrals can occupy.
#[derive(Debug, Clone)]
pub struct WindowFit {
    pub g: u32,
    pub n: usize,
    /// Degrees `2g - 3 + n ..= 3g - 3 + n` where coefficients may live.
    pub window: (u32, u32),
    pub fit: SymmetricFit,
}

impl WindowFit {
    /// Coefficients of monomials whose degree falls outside the window.
    pub fn outside(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        let (lo, hi) = self.window;
        self.fit
            .basis
            .iter()
            .zip(&self.fit.coefficients)
            .filter(move |(a, _)| {
                let deg: u32 = a.iter().sum();
                deg < lo || deg > hi
            })
    }
}

/// Fits `P_{g,n}` with the degree window widened by `below` and `above`,
/// growing the grid until at least [`MIN_HELD_OUT`] points are left over.
pub fn widened_fit(g: u32, n: usize, below: u32, above: u32) -> Result<WindowFit> {
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let window = (2 * g + n as u32 - 3, 3 * g + n as u32 - 3);
    let basis: Vec<Vec<u32>> = (window.0.saturating_sub(below)..=window.1 + above)
        .flat_map(|deg| exponent_multisets(deg, n))
        .collect();
    for max_part in 1..=64 {
        let grid = evaluation_grid(n, max_part);
        if grid.len() < basis.len() + MIN_HELD_OUT {
            continue;
        }
        match fit_symmetric(&basis, &evaluate_grid(g, &grid)?) {
            Ok(fit) if fit.held_out_points.len() >= MIN_HELD_OUT => {
                return Ok(WindowFit { g, n, window, fit })
            }
            Ok(_) | Err(Error::InsufficientGrid { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::InsufficientGrid {
        rank: 0,
        unknowns: basis.len(),
    })
}

/// Interpolates on the fixed grid `1..=max_part`.
pub fn interpolate_on_grid(g: u32, n: usize, max_part: u32) -> Result<Interpolation> {
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let evals = evaluate_grid(g, &evaluation_grid(n, max_part))?;
    Ok(Interpolation {
        max_part,
        ..interpolate_hodge(g, n, &evals)?
    })
}

/// [`interpolate_on_grid`] with a table obtained elsewhere.
pub fn check_on_grid(g: u32, n: usize, max_part: u32, table: &HodgeTable) -> Result<Interpolation> {
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let evals = evaluate_grid(g, &evaluation_grid(n, max_part))?;
    Ok(Interpolation {
        max_part,
        ..interpolate_or_check(g, n, &evals, Some(table))?
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElsvForm {
    /// `H = r!/#Aut(alpha) · prod alpha_i^alpha_i/alpha_i! · integral`
    Unlabeled,
    /// `1/r! · prod alpha_i!/alpha_i^alpha_i · deg(Hurwitz class) = integral`
    Labeled,
}

#[derive(Debug, Clone, Serialize)]
pub struct ElsvReport {
    pub form: ElsvForm,
    pub g: u32,
    pub alpha: Vec<u32>,
    #[serde(with = "scalar::serde_str")]
    pub lhs: Scalar,
    #[serde(with = "scalar::serde_str")]
    pub rhs: Scalar,
    pub equal: bool,
}

fn check_keys(g: u32, n: usize, table: &HodgeTable) -> Result<()> {
    let missing: Vec<String> = polynomial_model(g, n)?
        .into_iter()
        .filter(|k| !table.entries.contains_key(k))
        .map(|k| k.to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingKeys(missing))
    }
}

/// Both forms of the ELSV identity at one profile, from a Hurwitz value
/// computed by either route.
pub fn verify_elsv_value(value: &HurwitzValue, table: &HodgeTable) -> Result<[ElsvReport; 2]> {
    let p = &value.problem;
    if !p.is_stable() {
        return Err(Error::Unstable {
            g: p.genus,
            n: p.n(),
        });
    }
    check_keys(p.genus, p.n(), table)?;
    let integral = table.evaluate(&p.alpha);

    let labeled_lhs = scaled_from_value(value);
    let mut prefactor = scalar::from_biguint(&factorial(p.r() as u64))
        / scalar::from_biguint(&aut_count(&p.partition()));
    for &a in &p.alpha {
        prefactor *= Scalar::from_integer(BigInt::from(a).pow(a));
        prefactor /= scalar::from_biguint(&factorial(a as u64));
    }
    let unlabeled_rhs = prefactor * &integral;
    Ok([
        ElsvReport {
            form: ElsvForm::Unlabeled,
            g: p.genus,
            alpha: p.alpha.clone(),
            equal: value.h == unlabeled_rhs,
            lhs: value.h.clone(),
            rhs: unlabeled_rhs,
        },
        ElsvReport {
            form: ElsvForm::Labeled,
            g: p.genus,
            alpha: p.alpha.clone(),
            equal: labeled_lhs == integral,
            lhs: labeled_lhs,
            rhs: integral,
        },
    ])
}

pub fn verify_elsv(problem: &HurwitzProblem, table: &HodgeTable) -> Result<[ElsvReport; 2]> {
    verify_elsv_value(&crate::hurwitz::hurwitz_fast(problem), table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::hurwitz_brute;
    use crate::scalar::{int, ratio};

    fn problem(g: u32, alpha: &[u32]) -> HurwitzProblem {
        HurwitzProblem::new(g, alpha.to_vec()).unwrap()
    }

    #[test]
    fn scaled_hurwitz_examples() {
        assert_eq!(scaled_hurwitz(&problem(0, &[1, 1, 1])).unwrap(), int(1));
        assert_eq!(scaled_hurwitz(&problem(1, &[1])).unwrap(), int(0));
        assert_eq!(scaled_hurwitz(&problem(1, &[2])).unwrap(), ratio(1, 24));
        for (g, alpha) in [(0, vec![1]), (0, vec![2, 1])] {
            assert!(matches!(
                scaled_hurwitz(&problem(g, &alpha)),
                Err(Error::Unstable { .. })
            ));
        }
    }

    #[test]
    fn model_examples() {
        let m = polynomial_model(1, 1).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!((m[0].a.clone(), m[0].k), (vec![1], 0));
        assert_eq!((m[1].a.clone(), m[1].k), (vec![0], 1));
        let m = polynomial_model(0, 3).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].a, vec![0, 0, 0]);
        let m = polynomial_model(0, 4).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].a, vec![1, 0, 0, 0]);
        assert!(polynomial_model(0, 2).is_err());
    }

    #[test]
    fn model_degree_window() {
        for (g, n) in [(1, 1), (1, 3), (2, 1), (2, 3), (3, 2)] {
            let m = polynomial_model(g, n).unwrap();
            let lo = m.iter().map(HodgeIntegralKey::degree).min().unwrap();
            let hi = m.iter().map(HodgeIntegralKey::degree).max().unwrap();
            assert_eq!(lo as i64, 2 * g as i64 - 3 + n as i64);
            assert_eq!(hi as i64, 3 * g as i64 - 3 + n as i64);
        }
    }

    #[test]
    fn monomial_symmetric_counts_distinct_rearrangements() {
        assert_eq!(monomial_symmetric(&[1, 0, 0], &[2, 3, 5]), int(10));
        assert_eq!(monomial_symmetric(&[1, 1, 0], &[2, 3, 5]), int(6 + 10 + 15));
        assert_eq!(monomial_symmetric(&[0, 0], &[4, 7]), int(1));
        assert_eq!(monomial_symmetric(&[2, 1], &[2, 3]), int(12 + 18));
    }

    #[test]
    fn exponent_multisets_enumerate_partitions() {
        assert_eq!(exponent_multisets(2, 3), vec![vec![2, 0, 0], vec![1, 1, 0]]);
        assert_eq!(exponent_multisets(0, 2), vec![vec![0, 0]]);
        assert_eq!(exponent_multisets(6, 3).len(), 7);
    }

    #[test]
    fn genus_one_one_point() {
        let evals = vec![(vec![1], int(0)), (vec![2], ratio(1, 24))];
        let t = interpolate_hodge(1, 1, &evals).unwrap().table;
        assert_eq!(t.get(&[1], 0), Some(&ratio(1, 24)));
        assert_eq!(t.get(&[0], 1), Some(&ratio(1, 24)));
        // held-out: P(3) = 1/12 predicts H^1_(3) = 4! · 27/3! · 1/12 = 9
        assert_eq!(t.evaluate(&[3]), ratio(1, 12));
        let brute = hurwitz_brute(&problem(1, &[3])).unwrap();
        assert_eq!(brute.h, int(9));
        let [unlabeled, labeled] = verify_elsv_value(&brute, &t).unwrap();
        assert!(unlabeled.equal && labeled.equal);
    }

    #[test]
    fn point_class() {
        let t = interpolate_hodge(0, 3, &[(vec![1, 1, 1], int(1))])
            .unwrap()
            .table;
        assert_eq!(t.get(&[0, 0, 0], 0), Some(&int(1)));
    }

    #[test]
    fn interpolation_errors() {
        assert!(matches!(
            interpolate_hodge(1, 1, &[(vec![1], int(0))]),
            Err(Error::InsufficientGrid {
                rank: 1,
                unknowns: 2
            })
        ));
        assert!(matches!(
            interpolate_hodge(
                1,
                1,
                &[
                    (vec![1], int(0)),
                    (vec![2], ratio(1, 24)),
                    (vec![3], int(5))
                ]
            ),
            Err(Error::PolynomialityViolated { .. })
        ));
        assert!(matches!(
            interpolate_hodge(0, 1, &[]),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn verify_examples() {
        let t11 = auto_interpolate(1, 1, &[]).unwrap().table;
        for alpha in [[2], [1]] {
            for rep in verify_elsv(&problem(1, &alpha), &t11).unwrap() {
                assert!(rep.equal);
            }
        }
        let [u, l] = verify_elsv(&problem(1, &[2]), &t11).unwrap();
        assert_eq!((u.lhs.clone(), l.lhs.clone()), (ratio(1, 2), ratio(1, 24)));
        let t03 = auto_interpolate(0, 3, &[]).unwrap().table;
        let [_, l] = verify_elsv(&problem(0, &[1, 1, 1]), &t03).unwrap();
        assert!(l.equal);
        assert_eq!(l.rhs, int(1));
        let empty = HodgeTable::default();
        assert!(matches!(
            verify_elsv(&problem(1, &[2]), &empty),
            Err(Error::MissingKeys(ref v)) if v.len() == 2
        ));
    }

    #[test]
    fn genus_zero_matches_multinomial() {
        // <psi^a>_{0,n} = (n-3)! / prod a_i!
        for n in 3..=6usize {
            let t = auto_interpolate(0, n, &[]).unwrap().table;
            for (key, v) in &t.entries {
                let denom = key.a.iter().fold(num_bigint::BigUint::one(), |acc, &x| {
                    acc * factorial(x as u64)
                });
                let expect =
                    scalar::from_biguint(&factorial(n as u64 - 3)) / scalar::from_biguint(&denom);
                assert_eq!(v, &expect, "{key}");
            }
        }
    }

    #[test]
    fn known_low_genus_values() {
        let t12 = auto_interpolate(1, 2, &[]).unwrap().table;
        assert_eq!(t12.get(&[2, 0], 0), Some(&ratio(1, 24)));
        assert_eq!(t12.get(&[1, 1], 0), Some(&ratio(1, 24)));
        assert_eq!(t12.get(&[1, 0], 1), Some(&ratio(1, 24)));
        let t21 = auto_interpolate(2, 1, &[]).unwrap().table;
        assert_eq!(t21.get(&[4], 0), Some(&ratio(1, 1152)));
        assert_eq!(t21.get(&[3], 1), Some(&ratio(1, 480)));
        assert_eq!(t21.get(&[2], 2), Some(&ratio(7, 5760)));
    }

    #[test]
    fn symmetric_in_alpha() {
        let p = |a: &[u32]| scaled_hurwitz(&problem(1, a)).unwrap();
        assert_eq!(p(&[3, 1, 2]), p(&[1, 2, 3]));
        assert_eq!(p(&[2, 1, 3]), p(&[3, 2, 1]));
    }

    #[test]
    fn table_json_roundtrip() {
        let t = auto_interpolate(1, 1, &[]).unwrap().table;
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"[{"g":1,"n":1,"a":[1],"k":0,"value":"1/24"},{"g":1,"n":1,"a":[0],"k":1,"value":"1/24"}]"#
        );
        let back: HodgeTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn widened_window_is_empty_outside() {
        let w = widened_fit(1, 1, 1, 1).unwrap();
        assert_eq!(w.window, (0, 1));
        assert_eq!(w.fit.basis.len(), 3);
        assert!(w.outside().all(|(_, c)| c == &int(0)));
        assert_eq!(w.outside().count(), 1);
    }

    #[test]
    fn known_table_replays_the_fit() {
        for (g, n) in [(1, 1), (0, 4), (1, 2)] {
            let fresh = auto_interpolate(g, n, &[]).unwrap();
            let replay = auto_check(g, n, &fresh.table).unwrap();
            assert_eq!(
                serde_json::to_value(&fresh).unwrap(),
                serde_json::to_value(&replay).unwrap()
            );
        }
        let mut bad = auto_interpolate(1, 1, &[]).unwrap().table;
        let key = HodgeIntegralKey::new(1, 1, vec![1], 0).unwrap();
        bad.entries.insert(key, ratio(1, 12));
        assert!(matches!(
            auto_check(1, 1, &bad),
            Err(Error::PolynomialityViolated { .. })
        ));
        let grid = interpolate_on_grid(1, 1, 3).unwrap();
        assert_eq!(grid.max_part, 3);
        assert_eq!(
            check_on_grid(1, 1, 3, &grid.table).unwrap().held_out_points,
            grid.held_out_points
        );
    }
}
