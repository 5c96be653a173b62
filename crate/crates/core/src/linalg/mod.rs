//! Exact linear algebra over the rationals, prime fields and the integers.
//!
//! Matrices always hold exact rationals. A [`FieldTag`] decides how they are
//! read: over `Q` directly, over `F_p` by reducing every entry modulo `p`.
//! Integer work (Smith forms, torsion) uses [`IntMatrix`].

mod complex;
mod elim;
mod field;
mod poly;
mod smith;

pub use complex::{
    complex_cohomology, CochainComplex, Coefficients, CohomologyGroup, CohomologyReport,
};
pub use elim::{rank, rank_kernel, RankKernel};
pub use field::{format_rational, parse_rational, FieldTag, Scalar};
pub use poly::{poly_div_exact, IntPolynomial};
pub use smith::{integer_determinant, smith_normal_form, SmithForm};

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub type Rational = BigRational;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ExactMatrix = Matrix<Rational>;
pub type IntMatrix = Matrix<BigInt>;

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    /// Builds a matrix from explicit rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> crate::Result<Self> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(crate::Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n_rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn select_rows(&self, which: &[usize]) -> Self {
        let mut data = Vec::with_capacity(which.len() * self.cols);
        for &i in which {
            data.extend_from_slice(self.row(i));
        }
        Matrix { rows: which.len(), cols: self.cols, data }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl<T: Clone + Zero + num_traits::One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> std::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Matrix<T>) -> crate::Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(crate::Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * &other[(k, j)];
                    let slot = &mut out[(i, j)];
                    *slot = std::mem::replace(slot, T::zero()) + prod;
                }
            }
        }
        Ok(out)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// Integer matrix from small literals.
pub fn int_matrix(rows: &[&[i64]], cols: usize) -> IntMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
        .expect("rows must have `cols` entries")
}

/// Rational matrix from small integer literals.
pub fn rational_matrix(rows: &[&[i64]], cols: usize) -> ExactMatrix {
    int_matrix(rows, cols).map(|x| Rational::from_integer(x.clone()))
}

/// Reads a rational matrix as an integer matrix, failing on any fractional entry.
pub fn to_integer_matrix(m: &ExactMatrix) -> crate::Result<IntMatrix> {
    let mut data = Vec::with_capacity(m.rows * m.cols);
    for x in &m.data {
        if !x.is_integer() {
            return Err(crate::Error::NotAnInteger(x.to_string()));
        }
        data.push(x.to_integer());
    }
    Ok(Matrix { rows: m.rows, cols: m.cols, data })
}
