//! Dense exact linear algebra over ℚ, just enough for graded decomposition
//! and rank checks.

use crate::exactnum::Rational;

/// Row-reduces `rows` in place to reduced row-echelon form and returns the
/// pivot column of each non-zero row. Only the first `ncols` columns are
/// eligible as pivots, so an augmented right-hand side can ride along.
pub fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is non-zero");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    rref(&mut rows, ncols).len()
}

/// Solves `A x = b` given the augmented matrix `[A | b]` (last column is `b`).
/// Free variables are set to zero. Returns `None` if inconsistent.
pub fn solve_augmented(mut rows: Vec<Vec<Rational>>, nvars: usize) -> Option<Vec<Rational>> {
    let pivots = rref(&mut rows, nvars);
    for row in rows.iter().skip(pivots.len()) {
        if !row[nvars].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); nvars];
    for (row, &c) in rows.iter().zip(&pivots) {
        x[c] = row[nvars].clone();
    }
    Some(x)
}
