use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Integer polynomial in `t`, coefficients in ascending degree.
///
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }
}

/// Exact quotient `a / b` in `Z[t]`; fails unless `b` divides `a`.
pub fn poly_div_exact(a: &IntPolynomial, b: &IntPolynomial) -> Result<IntPolynomial> {
    let Some(db) = b.degree() else {
        return Err(Error::Invalid("division by the zero polynomial".into()));
    };
    let lead = &b.coeffs[db];
    let mut rem = a.coeffs.clone();
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(db).max(1)];
    while rem.len() > db {
        let top = rem.len() - 1;
        let (q, r) = rem[top].div_rem(lead);
        if !r.is_zero() {
            break;
        }
        let shift = top - db;
        for (k, c) in b.coeffs.iter().enumerate() {
            rem[shift + k] -= &q * c;
        }
        quot[shift] = q;
        rem.pop();
        while rem.last().is_some_and(Zero::is_zero) {
            rem.pop();
        }
    }
    let remainder = IntPolynomial::new(rem);
    if !remainder.is_zero() {
        return Err(Error::InexactDivision { remainder });
    }
    Ok(IntPolynomial::new(quot))
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mul(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
        if a.is_zero() || b.is_zero() {
            return IntPolynomial::default();
        }
        let mut out = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        IntPolynomial::new(out)
    }

    #[test]
    fn display() {
        assert_eq!(IntPolynomial::from_i64(&[1, 3, 2]).to_string(), "1 + 3t + 2t^2");
        assert_eq!(IntPolynomial::from_i64(&[0, -1, 0, 1]).to_string(), "-t + t^3");
        assert_eq!(IntPolynomial::from_i64(&[0, 0]).to_string(), "0");
    }

    #[test]
    fn divide_poincare_by_one_plus_t() {
        let pi = IntPolynomial::from_i64(&[1, 3, 2]);
        let q = poly_div_exact(&pi, &IntPolynomial::from_i64(&[1, 1])).unwrap();
        assert_eq!(q, IntPolynomial::from_i64(&[1, 2]));
    }

    #[test]
    fn inexact_division_reports_remainder() {
        let err = poly_div_exact(&IntPolynomial::from_i64(&[1, 0, 1]), &IntPolynomial::from_i64(&[1, 1])).unwrap_err();
        match err {
            Error::InexactDivision { remainder } => assert_eq!(remainder, IntPolynomial::from_i64(&[2])),
            other => panic!("unexpected {other:?}"),
        }
        assert!(poly_div_exact(&IntPolynomial::from_i64(&[1]), &IntPolynomial::default()).is_err());
    }

    #[test]
    fn zero_divided_is_zero() {
        assert!(poly_div_exact(&IntPolynomial::default(), &IntPolynomial::from_i64(&[1, 1])).unwrap().is_zero());
    }

    proptest! {
        #[test]
        fn product_divides_back(a in prop::collection::vec(-9i64..10, 0..6), b in prop::collection::vec(-9i64..10, 1..4)) {
            let (a, b) = (IntPolynomial::from_i64(&a), IntPolynomial::from_i64(&b));
            prop_assume!(!b.is_zero());
            prop_assert_eq!(poly_div_exact(&mul(&a, &b), &b).unwrap(), a);
        }
    }
}
