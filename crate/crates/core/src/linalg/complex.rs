use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{rank, smith_normal_form, to_integer_matrix, ExactMatrix, FieldTag};
use crate::{Error, Result};

/// Coefficients for a cohomology computation: a field or the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Coefficients {
    Integers,
    Rational,
    Prime { p: u64 },
}

impl Coefficients {
    pub fn field(&self) -> Option<FieldTag> {
        match *self {
            Coefficients::Integers => None,
            Coefficients::Rational => Some(FieldTag::Rational),
            Coefficients::Prime { p } => Some(FieldTag::Prime(p)),
        }
    }
}

impl From<FieldTag> for Coefficients {
    fn from(f: FieldTag) -> Self {
        match f {
            FieldTag::Rational => Coefficients::Rational,
            FieldTag::Prime(p) => Coefficients::Prime { p },
        }
    }
}

/// Finite cochain complex `C^s -> C^{s+1} -> ... -> C^{s+len-1}`.
///
/// `diffs[k]` is the matrix of `d: C^{s+k} -> C^{s+k+1}`, shape
/// `dims[k+1] x dims[k]`, so there is one fewer differential than degree.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    coeffs: Coefficients,
    start: i64,
    dims: Vec<usize>,
    diffs: Vec<ExactMatrix>,
}

impl CochainComplex {
    pub fn new(coeffs: Coefficients, start: i64, dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self> {
        if let Some(f) = coeffs.field() {
            f.validate()?;
        }
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::ShapeMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(Error::ShapeMismatch(format!(
                    "d^{} is {}x{}, expected {}x{}",
                    start + k as i64,
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
            if coeffs == Coefficients::Integers {
                to_integer_matrix(d)?;
            }
        }
        let c = CochainComplex { coeffs, start, dims, diffs };
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let comp = self.diffs[k].mul(&self.diffs[k - 1])?;
            let zero = match self.coeffs.field() {
                Some(f) => {
                    let mut all = true;
                    for i in 0..comp.rows() {
                        for x in comp.row(i) {
                            all &= f.reduce(x)?.is_zero();
                        }
                    }
                    all
                }
                None => comp.is_zero(),
            };
            if !zero {
                return Err(Error::NotAComplex { degree: self.start + k as i64 });
            }
        }
        Ok(())
    }

    pub fn coeffs(&self) -> Coefficients {
        self.coeffs
    }

    pub fn start_degree(&self) -> i64 {
        self.start
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differentials(&self) -> &[ExactMatrix] {
        &self.diffs
    }

    /// Alternating sum of cochain dimensions.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if (self.start + k as i64).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyGroup {
    pub degree: i64,
    /// Dimension over a field, free rank over the integers.
    pub rank: usize,
    /// Invariant factors greater than one; always empty over a field.
    pub torsion: Vec<u64>,
}

impl CohomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub coeffs: Coefficients,
    pub start_degree: i64,
    pub groups: Vec<CohomologyGroup>,
}

impl CohomologyReport {
    pub fn group(&self, degree: i64) -> Option<&CohomologyGroup> {
        self.groups.iter().find(|g| g.degree == degree)
    }

    /// Rank in `degree`, zero outside the complex.
    pub fn rank(&self, degree: i64) -> usize {
        self.group(degree).map_or(0, |g| g.rank)
    }

    pub fn torsion(&self, degree: i64) -> &[u64] {
        self.group(degree).map_or(&[], |g| &g.torsion)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups.iter().map(|g| if g.degree.rem_euclid(2) == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(CohomologyGroup::is_zero)
    }

    /// Degrees with nonzero cohomology (free part or torsion).
    pub fn nonzero_degrees(&self) -> Vec<i64> {
        self.groups.iter().filter(|g| !g.is_zero()).map(|g| g.degree).collect()
    }

    /// True when all cohomology sits in `degree` (vacuously true for zero cohomology).
    pub fn concentrated_in(&self, degree: i64) -> bool {
        self.nonzero_degrees().iter().all(|&d| d == degree)
    }
}

fn invariant_factors(m: &ExactMatrix) -> Result<(usize, Vec<u64>)> {
    let snf = smith_normal_form(&to_integer_matrix(m)?);
    let torsion = snf
        .diag
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| {
            d.to_u64().ok_or_else(|| Error::ScaleLimit(format!("invariant factor {d} does not fit in 64 bits")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((snf.rank, torsion))
}

pub fn complex_cohomology(c: &CochainComplex) -> Result<CohomologyReport> {
    let n = c.dims.len();
    let mut ranks = Vec::with_capacity(c.diffs.len());
    let mut torsions = Vec::with_capacity(c.diffs.len());
    for d in &c.diffs {
        match c.coeffs.field() {
            Some(f) => {
                ranks.push(rank(d, &f)?);
                torsions.push(Vec::new());
            }
            None => {
                let (r, t) = invariant_factors(d)?;
                ranks.push(r);
                torsions.push(t);
            }
        }
    }
    let groups = (0..n)
        .map(|k| {
            let out = if k < c.diffs.len() { ranks[k] } else { 0 };
            let (inc, torsion) = if k > 0 { (ranks[k - 1], torsions[k - 1].clone()) } else { (0, Vec::new()) };
            CohomologyGroup { degree: c.start + k as i64, rank: c.dims[k] - out - inc, torsion }
        })
        .collect();
    Ok(CohomologyReport { coeffs: c.coeffs, start_degree: c.start, groups })
}
