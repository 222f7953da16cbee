//! Exact linear algebra over the rationals.
//!
//! Systems are brought to integer form by clearing denominators row by row
//! and then reduced with Bareiss' fraction-free elimination: every division
//! in the elimination is exact, so intermediate entries stay integral and
//! bounded by minors of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// Columns without a pivot remain; `rank` pivots were found.
    RankDeficient { rank: usize },
    /// The right-hand side is not in the column span.
    Inconsistent { rank: usize },
}

/// Row echelon form of an integer matrix, computed fraction-free.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    /// (row, column) of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

fn clear_denominators(row: &[Scalar]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Fraction-free Gaussian elimination. Pivots are the first nonzero entry
/// at or below the current row in each column.
pub fn bareiss(mut m: Vec<Vec<BigInt>>) -> Echelon {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    Echelon { rows: m, pivots }
}

pub fn rank(a: &[Vec<Scalar>]) -> usize {
    bareiss(a.iter().map(|r| clear_denominators(r)).collect())
        .pivots
        .len()
}

/// Solves `a x = b` exactly. `a` may have more rows than columns; the
/// solution must then satisfy every row.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Result<Vec<Scalar>, SolveError> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut full = row.clone();
            full.push(rhs.clone());
            clear_denominators(&full)
        })
        .collect();
    let ech = bareiss(aug);
    let rank = ech.pivots.iter().filter(|&&(_, c)| c < cols).count();
    if ech.pivots.iter().any(|&(_, c)| c == cols) {
        return Err(SolveError::Inconsistent { rank });
    }
    if rank < cols {
        return Err(SolveError::RankDeficient { rank });
    }
    let mut x = vec![Scalar::zero(); cols];
    for &(r, c) in ech.pivots.iter().rev() {
        let row = &ech.rows[r];
        let mut acc = Scalar::from_integer(row[cols].clone());
        for j in c + 1..cols {
            if !row[j].is_zero() {
                acc -= Scalar::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[c] = acc / Scalar::from_integer(row[c].clone());
    }
    Ok(x)
}

/// Rows added one at a time; keeps those independent of the ones before.
#[derive(Debug, Clone, Default)]
pub struct IncrementalBasis {
    // reduced rows with their pivot column, pivot entry normalized to 1
    reduced: Vec<(usize, Vec<Scalar>)>,
}

impl IncrementalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Returns whether `row` was independent (and therefore kept).
    pub fn push(&mut self, row: &[Scalar]) -> bool {
        let mut v = row.to_vec();
        for (c, basis) in &self.reduced {
            if !v[*c].is_zero() {
                let f = v[*c].clone();
                for (x, y) in v.iter_mut().zip(basis) {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(c) => {
                let p = v[c].clone();
                for x in v.iter_mut() {
                    *x /= &p;
                }
                self.reduced.push((c, v));
                true
            }
            None => false,
        }
    }
}

/// Largest absolute value in a solution, for reporting.
pub fn max_abs(x: &[Scalar]) -> Scalar {
    x.iter().map(|v| v.abs()).max().unwrap_or_else(Scalar::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn solves_small_system() {
        // a - b = 0, 2a - b = 1/24
        let a = m(&[&[1, -1], &[2, -1]]);
        let x = solve(&a, &[int(0), ratio(1, 24)]).unwrap();
        assert_eq!(x, vec![ratio(1, 24), ratio(1, 24)]);
    }

    #[test]
    fn detects_rank_and_inconsistency() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&a), 1);
        assert_eq!(
            solve(&a, &[int(1), int(2)]),
            Err(SolveError::RankDeficient { rank: 1 })
        );
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(
            solve(&a, &[int(1), int(1), int(3)]),
            Err(SolveError::Inconsistent { rank: 2 })
        );
        assert_eq!(
            solve(&a, &[int(1), int(1), int(2)]).unwrap(),
            vec![int(1), int(1)]
        );
    }

    #[test]
    fn skipped_columns_keep_divisions_exact() {
        let a = m(&[&[0, 2, 3, 1], &[0, 4, 1, 5], &[0, 6, 4, 6], &[0, 1, 1, 1]]);
        let e = bareiss(a.iter().map(|r| clear_denominators(r)).collect());
        assert_eq!(e.pivots.len(), 3);
        assert_eq!(e.pivots[0], (0, 1));
    }

    #[test]
    fn incremental_basis_matches_rank() {
        let rows = m(&[&[1, 1, 1], &[1, 2, 4], &[2, 3, 5], &[1, 3, 9]]);
        let mut b = IncrementalBasis::new();
        let kept: Vec<bool> = rows.iter().map(|r| b.push(r)).collect();
        assert_eq!(kept, vec![true, true, false, true]);
        assert_eq!(b.rank(), rank(&rows));
    }

    proptest! {
        #[test]
        fn solution_satisfies_random_systems(
            entries in proptest::collection::vec(-9i64..10, 16),
            xs in proptest::collection::vec((-20i64..20, 1i64..7), 4),
        ) {
            let a: Vec<Vec<Scalar>> = entries.chunks(4).map(|r| r.iter().map(|&v| int(v)).collect()).collect();
            let x: Vec<Scalar> = xs.iter().map(|&(p, q)| ratio(p, q)).collect();
            let b: Vec<Scalar> = a.iter().map(|row| row.iter().zip(&x).map(|(u, v)| u * v).sum()).collect();
            match solve(&a, &b) {
                Ok(sol) => prop_assert_eq!(sol, x),
                Err(SolveError::RankDeficient { rank: r }) => prop_assert!(r < 4),
                Err(e) => prop_assert!(false, "{:?}", e),
            }
        }
    }
}
