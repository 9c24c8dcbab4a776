//! Exact row reduction over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduced row echelon form. Returns the nonzero rows (each pivot equal to 1,
/// zero elsewhere in its column) and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<Rational>>) -> usize {
    rref(rows).1.len()
}

/// Solution set of `A x = b` for an `m x n` system.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    /// Unique solution.
    Unique(Vec<Rational>),
    /// A particular solution together with the indices of free unknowns.
    Underdetermined {
        particular: Vec<Rational>,
        free: Vec<usize>,
    },
    /// Index of an equation that the reduced system cannot satisfy.
    Inconsistent(usize),
}

pub fn solve(a: &[Vec<Rational>], b: &[Rational], unknowns: usize) -> Solution {
    // Augment with b and an identity block tracking which equation each
    // reduced row came from.
    let m = a.len();
    let rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, rhs))| {
            let mut v = row.clone();
            v.push(rhs.clone());
            v.extend((0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            v
        })
        .collect();
    if rows.is_empty() {
        return if unknowns == 0 {
            Solution::Unique(Vec::new())
        } else {
            Solution::Underdetermined {
                particular: vec![Rational::zero(); unknowns],
                free: (0..unknowns).collect(),
            }
        };
    }
    let (red, pivots) = rref(rows);
    for (row, &p) in red.iter().zip(&pivots) {
        if p == unknowns {
            // 0 = nonzero: report the last original equation involved, the
            // one that contradicts those before it.
            let witness = (0..m).rev().find(|&j| !row[unknowns + 1 + j].is_zero()).unwrap_or(0);
            return Solution::Inconsistent(witness);
        }
    }
    let mut x = vec![Rational::zero(); unknowns];
    for (row, &p) in red.iter().zip(&pivots) {
        if p < unknowns {
            x[p] = row[unknowns].clone();
        }
    }
    let free: Vec<usize> = (0..unknowns).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined { particular: x, free }
    }
}

/// Determinant by elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let pivot_row = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rref_of_dependent_rows() {
        let (rows, pivots) = rref(m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]));
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rows, m(&[&[1, 0, 1], &[0, 1, 1]]));
    }

    #[test]
    fn solve_cases() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, &[int(2), int(0)], 2), Solution::Unique(vec![int(1), int(1)]));
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&a, &[int(1), int(3)], 2), Solution::Inconsistent(1));
        match solve(&m(&[&[1, 1]]), &[int(1)], 2) {
            Solution::Underdetermined { free, .. } => assert_eq!(free, vec![1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(m(&[&[2, 1], &[1, 1]])), int(1));
        assert_eq!(determinant(m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(m(&[&[1, 2], &[2, 4]])), int(0));
    }
}
