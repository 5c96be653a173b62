//! Smith normal form by elementary row and column operations.
//!
//! The pivot is always the entry of smallest absolute value in the active
//! block, so each reduction pass strictly shrinks it; the cost is roughly
//! quadratic in the matrix size per pivot, which is fine for the small
//! matrices this crate feeds it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntMatrix, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | ... | d_r`, all positive.
    pub diag: Vec<BigInt>,
    /// Unimodular `left` and `right` with `left * A * right` diagonal.
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The diagonal matrix `left * A * right` as a full matrix of `A`'s shape.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

fn add_row_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for j in 0..m.cols() {
        let delta = &m[(source, j)] * factor;
        m[(target, j)] += delta;
    }
}

fn add_col_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for i in 0..m.rows() {
        let delta = &m[(i, source)] * factor;
        m[(i, target)] += delta;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols() {
        let x = std::mem::take(&mut m[(i, j)]);
        m[(i, j)] = -x;
    }
}

fn min_abs_in_block(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut t = 0;

    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_in_block(&a, t) else { break };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&pivot);
                add_row_multiple(&mut a, i, t, &q);
                add_row_multiple(&mut left, i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&pivot);
                add_col_multiple(&mut a, j, t, &q);
                add_col_multiple(&mut right, j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot survives in row or column t
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                left.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                right.swap_cols(t, best.1);
                continue;
            }
            // row and column are clear; enforce divisibility of the rest
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    add_row_multiple(&mut a, t, i, &one);
                    add_row_multiple(&mut left, t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut left, t);
        }
        t += 1;
    }

    let diag: Vec<BigInt> = (0..t).map(|i| a[(i, i)].clone()).collect();
    SmithForm { rank: diag.len(), diag, left, right }
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn integer_determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Matrix<BigInt> = m.clone();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}
