use num_traits::{One, Zero};

use super::field::inv_mod;
use super::{ExactMatrix, FieldTag, Rational};
use crate::Result;

/// Rank of a matrix together with a basis of its right kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel_basis: Vec<Vec<Rational>>,
}

trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn sub_mul(&self, a: &Self::E, b: &Self::E, c: &Self::E) -> Self::E; // a - b*c
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct QArith;

impl Arith for QArith {
    type E = Rational;
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn sub_mul(&self, a: &Rational, b: &Rational, c: &Rational) -> Rational {
        a - b * c
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
}

struct FpArith(u64);

impl Arith for FpArith {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn sub_mul(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        let p = self.0;
        (a + p - b * c % p) % p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
}

/// In-place reduced row echelon form; returns the pivot columns.
fn rref<A: Arith>(ar: &A, rows: &mut [Vec<A::E>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !ar.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ar.inv(&rows[r][c]);
        for x in rows[r][c..].iter_mut() {
            *x = ar.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || ar.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for j in c..cols {
                if !ar.is_zero(&pivot_row[j]) {
                    row[j] = ar.sub_mul(&row[j], &factor, &pivot_row[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_from_rref<A: Arith>(ar: &A, rows: &[Vec<A::E>], pivots: &[usize], cols: usize) -> Vec<Vec<A::E>> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![ar.zero(); cols];
            v[free] = ar.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ar.neg(&rows[r][free]);
            }
            v
        })
        .collect()
}

fn fp_rows(m: &ExactMatrix, p: u64) -> Result<Vec<Vec<u64>>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| FieldTag::residue(p, x)).collect())
        .collect()
}

/// Rank and kernel basis of `m` read over `field`.
///
/// Kernel vectors over `F_p` are returned as integer representatives in `[0, p)`.
pub fn rank_kernel(m: &ExactMatrix, field: &FieldTag) -> Result<RankKernel> {
    field.validate()?;
    let cols = m.cols();
    match *field {
        FieldTag::Rational => {
            let mut rows = m.to_rows();
            let pivots = rref(&QArith, &mut rows, cols);
            let kernel_basis = kernel_from_rref(&QArith, &rows, &pivots, cols);
            Ok(RankKernel { rank: pivots.len(), kernel_basis })
        }
        FieldTag::Prime(p) => {
            let ar = FpArith(p);
            let mut rows = fp_rows(m, p)?;
            let pivots = rref(&ar, &mut rows, cols);
            let kernel_basis = kernel_from_rref(&ar, &rows, &pivots, cols)
                .into_iter()
                .map(|v| v.into_iter().map(|x| Rational::from_integer(x.into())).collect())
                .collect();
            Ok(RankKernel { rank: pivots.len(), kernel_basis })
        }
    }
}

/// Rank only; skips building the kernel.
pub fn rank(m: &ExactMatrix, field: &FieldTag) -> Result<usize> {
    field.validate()?;
    let cols = m.cols();
    Ok(match *field {
        FieldTag::Rational => {
            let mut rows = m.to_rows();
            rref(&QArith, &mut rows, cols).len()
        }
        FieldTag::Prime(p) => {
            let mut rows = fp_rows(m, p)?;
            rref(&FpArith(p), &mut rows, cols).len()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rational_matrix, Matrix};

    fn apply(m: &ExactMatrix, v: &[Rational], field: &FieldTag) -> Vec<Rational> {
        (0..m.rows())
            .map(|i| {
                let s: Rational = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
                field.reduce(&s).unwrap()
            })
            .collect()
    }

    #[test]
    fn identity_has_full_rank() {
        let rk = rank_kernel(&Matrix::identity(3), &FieldTag::Rational).unwrap();
        assert_eq!(rk.rank, 3);
        assert!(rk.kernel_basis.is_empty());
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let rk = rank_kernel(&ExactMatrix::zeros(2, 3), &FieldTag::Rational).unwrap();
        assert_eq!(rk.rank, 0);
        assert_eq!(rk.kernel_basis.len(), 3);
    }

    #[test]
    fn all_ones_row_mod_7() {
        let f = FieldTag::prime(7).unwrap();
        let m = rational_matrix(&[&[1, 1, 1]], 3);
        let rk = rank_kernel(&m, &f).unwrap();
        assert_eq!(rk.rank, 1);
        assert_eq!(rk.kernel_basis.len(), 2);
        for v in &rk.kernel_basis {
            assert!(apply(&m, v, &f).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 6, so rank drops mod 2 and mod 3 only
        let m = rational_matrix(&[&[2, 0], &[0, 3]], 2);
        assert_eq!(rank(&m, &FieldTag::Rational).unwrap(), 2);
        assert_eq!(rank(&m, &FieldTag::Prime(2)).unwrap(), 1);
        assert_eq!(rank(&m, &FieldTag::Prime(3)).unwrap(), 1);
        assert_eq!(rank(&m, &FieldTag::Prime(5)).unwrap(), 2);
    }

    #[test]
    fn non_prime_modulus_rejected() {
        let m = rational_matrix(&[&[1]], 1);
        assert!(rank_kernel(&m, &FieldTag::Prime(6)).is_err());
    }
}
