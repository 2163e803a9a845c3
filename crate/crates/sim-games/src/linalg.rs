//! Exact linear-system solving by Gauss–Jordan elimination over [`Rational`].
//!
//! Systems here are tiny (a handful of unknowns), so a dense
//! reduced-row-echelon pass is both the simplest and an auditable choice.
//! Rank-deficient systems are reported with an explicit affine solution set
//! rather than an error, because callers use the dimension of that set to
//! detect degenerate games and polytope faces.

use crate::rational::Rational;

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// No solution.
    Inconsistent,
    /// Exactly one solution.
    Unique(Vec<Rational>),
    /// Solutions form `particular + span(basis)` with `basis` non-empty.
    Affine {
        particular: Vec<Rational>,
        basis: Vec<Vec<Rational>>,
    },
}

impl Solution {
    pub fn unique(self) -> Option<Vec<Rational>> {
        match self {
            Solution::Unique(x) => Some(x),
            _ => None,
        }
    }
}

/// Solves `A x = b` where `a` is given in row-major order.
///
/// `a.len()` is the number of equations; each row must have the same length
/// (the number of unknowns), and `b.len()` must equal `a.len()`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    assert_eq!(a.len(), b.len(), "system row count mismatch");
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };

    // Augmented matrix [A | b].
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged system row");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip();
        for j in col..=cols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..=cols {
                    let delta = &m[rank][j] * &factor;
                    m[r][j] = &m[r][j] - &delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }

    for r in rank..rows {
        if !m[r][cols].is_zero() {
            return Solution::Inconsistent;
        }
    }

    let mut particular = vec![Rational::zero(); cols];
    for (r, &col) in pivot_cols.iter().enumerate() {
        particular[col] = m[r][cols].clone();
    }

    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    if free_cols.is_empty() {
        return Solution::Unique(particular);
    }

    let basis = free_cols
        .iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect();
    Solution::Affine { particular, basis }
}

/// Dot product of two equal-length slices.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1
        let a = vec![vec![r(1), r(1)], vec![r(1), r(-1)]];
        let b = vec![r(3), r(1)];
        assert_eq!(solve(&a, &b), Solution::Unique(vec![r(2), r(1)]));
    }

    #[test]
    fn fractional_solution() {
        // 2x + 3y = 1, 4x + 9y = 2  =>  x = 1/2, y = 0
        let a = vec![vec![r(2), r(3)], vec![r(4), r(9)]];
        let b = vec![r(1), r(2)];
        assert_eq!(solve(&a, &b), Solution::Unique(vec![rat!(1 / 2), r(0)]));
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        let b = vec![r(1), r(3)];
        assert_eq!(solve(&a, &b), Solution::Inconsistent);
    }

    #[test]
    fn underdetermined_system_reports_nullspace() {
        // x + y + z = 1 has a two-dimensional solution set.
        let a = vec![vec![r(1), r(1), r(1)]];
        let b = vec![r(1)];
        match solve(&a, &b) {
            Solution::Affine { particular, basis } => {
                assert_eq!(basis.len(), 2);
                assert_eq!(dot(&[r(1), r(1), r(1)], &particular), r(1));
                for v in &basis {
                    assert_eq!(dot(&[r(1), r(1), r(1)], v), r(0));
                }
            }
            other => panic!("expected affine solution, got {other:?}"),
        }
    }

    #[test]
    fn redundant_equations_still_unique() {
        let a = vec![
            vec![r(1), r(0)],
            vec![r(0), r(1)],
            vec![r(1), r(1)],
        ];
        let b = vec![r(5), r(7), r(12)];
        assert_eq!(solve(&a, &b), Solution::Unique(vec![r(5), r(7)]));
    }
}
