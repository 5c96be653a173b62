//! Central hyperplane arrangements over the rationals.
//!
//! Hyperplanes are kernels of linear forms; a flat is represented by the
//! set of hyperplanes containing it, which makes the intersection lattice
//! purely combinatorial once closures are known.

mod lattice;
mod nested;
mod rank_one;

pub use lattice::{Flat, IntersectionLattice};
pub use nested::{is_nested, BuildingSet, BuildingSetKind, NestedComplex};
pub use rank_one::{
    depth_bound, e2_certificate, nested_poset, vanishing_check, RankOneSystem, VanishingMode, VanishingVerdict,
    WeightsJson,
};

use std::collections::HashSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{rank, rank_kernel, ExactMatrix, FieldTag, Matrix, Rational, Scalar};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    n: usize,
    labels: Vec<String>,
    normals: ExactMatrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneJson {
    pub label: String,
    pub normal: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementJson {
    pub n: usize,
    pub hyperplanes: Vec<HyperplaneJson>,
}

impl Arrangement {
    pub fn new(n: usize, labels: Vec<String>, normals: Vec<Vec<Rational>>) -> Result<Self> {
        if labels.len() != normals.len() {
            return Err(Error::ShapeMismatch(format!("{} labels for {} normals", labels.len(), normals.len())));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let normals = Matrix::from_rows(normals, n)?;
        for i in 0..normals.rows() {
            if normals.row(i).iter().all(Zero::is_zero) {
                return Err(Error::ZeroNormal(labels[i].clone()));
            }
        }
        for i in 0..normals.rows() {
            for j in i + 1..normals.rows() {
                if rank(&normals.select_rows(&[i, j]), &FieldTag::Rational)? < 2 {
                    return Err(Error::RepeatedHyperplane(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(Arrangement { n, labels, normals })
    }

    /// Arrangement from integer normals with labels `H1, H2, ...`.
    pub fn from_integer_rows(n: usize, rows: &[&[i64]]) -> Result<Self> {
        let labels = (1..=rows.len()).map(|i| format!("H{i}")).collect();
        let normals = rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        Self::new(n, labels, normals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn normals(&self) -> &ExactMatrix {
        &self.normals
    }

    pub fn rank(&self) -> usize {
        rank(&self.normals, &FieldTag::Rational).expect("rational rank")
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.n
    }

    pub fn require_essential(&self) -> Result<()> {
        let r = self.rank();
        if r != self.n {
            return Err(Error::NotEssential { rank: r, n: self.n });
        }
        Ok(())
    }

    /// Sub-arrangement on the given hyperplane indices (same ambient space).
    pub fn subarrangement(&self, indices: &[usize]) -> Arrangement {
        Arrangement {
            n: self.n,
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            normals: self.normals.select_rows(indices),
        }
    }

    /// All hyperplanes whose normal lies in the span of the normals in `set`.
    pub fn closure(&self, set: &[usize]) -> Vec<usize> {
        let base = self.normals.select_rows(set);
        let r = rank(&base, &FieldTag::Rational).expect("rational rank");
        (0..self.len())
            .filter(|&h| {
                set.contains(&h) || {
                    let mut rows = set.to_vec();
                    rows.push(h);
                    rank(&self.normals.select_rows(&rows), &FieldTag::Rational).expect("rational rank") == r
                }
            })
            .collect()
    }

    /// Rank (codimension of the intersection) of a set of hyperplanes.
    pub fn set_rank(&self, set: &[usize]) -> usize {
        rank(&self.normals.select_rows(set), &FieldTag::Rational).expect("rational rank")
    }

    /// Basis of the common kernel of the hyperplanes in `set`.
    pub fn kernel_basis(&self, set: &[usize]) -> Vec<Vec<Rational>> {
        let m = if set.is_empty() { ExactMatrix::zeros(0, self.n) } else { self.normals.select_rows(set) };
        rank_kernel(&m, &FieldTag::Rational).expect("rational kernel").kernel_basis
    }

    /// Projects onto the quotient by the common kernel, giving an essential
    /// arrangement with the same lattice.
    pub fn essentialize(&self) -> Arrangement {
        let r = self.rank();
        if r == self.n {
            return self.clone();
        }
        // write every normal in a basis of the row space
        let all: Vec<usize> = (0..self.len()).collect();
        let mut basis_rows: Vec<usize> = Vec::new();
        for &h in &all {
            let mut trial = basis_rows.clone();
            trial.push(h);
            if self.set_rank(&trial) > basis_rows.len() {
                basis_rows = trial;
            }
        }
        let b = self.normals.select_rows(&basis_rows);
        let coords = (0..self.len())
            .map(|h| {
                // solve c · B = normal_h through the kernel of [B; -normal_h]^T
                let mut rows = b.to_rows();
                rows.push(self.normals.row(h).iter().map(|x| -x).collect());
                let m = Matrix::from_rows(rows, self.n).expect("shape").transpose();
                let ker = rank_kernel(&m, &FieldTag::Rational).expect("kernel").kernel_basis;
                let v = ker.into_iter().find(|v| !v[r].is_zero()).expect("normal lies in the row space");
                let scale = v[r].clone();
                v[..r].iter().map(|x| x / &scale).collect::<Vec<_>>()
            })
            .collect();
        Arrangement::new(r, self.labels.clone(), coords).expect("essentialization keeps hyperplanes distinct")
    }

    pub fn from_json(json: &ArrangementJson) -> Result<Self> {
        let labels = json.hyperplanes.iter().map(|h| h.label.clone()).collect();
        let normals = json.hyperplanes.iter().map(|h| h.normal.iter().map(|s| s.0.clone()).collect()).collect();
        Self::new(json.n, labels, normals)
    }

    pub fn to_json(&self) -> ArrangementJson {
        ArrangementJson {
            n: self.n,
            hyperplanes: (0..self.len())
                .map(|i| HyperplaneJson {
                    label: self.labels[i].clone(),
                    normal: self.normals.row(i).iter().cloned().map(Scalar).collect(),
                })
                .collect(),
        }
    }
}

/// Named example arrangements used in tests, docs and the CLI.
pub mod examples {
    use super::Arrangement;

    /// Coordinate hyperplanes in dimension `n`.
    pub fn boolean(n: usize) -> Arrangement {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        Arrangement::from_integer_rows(n, &refs).expect("boolean arrangement")
    }

    /// `m` distinct lines through the origin of the plane, `m <= 6`.
    pub fn lines(m: usize) -> Arrangement {
        const NORMALS: [[i64; 2]; 6] = [[1, 0], [0, 1], [1, 1], [1, -1], [1, 2], [2, 1]];
        assert!((1..=6).contains(&m), "lines() supports 1 to 6 lines");
        let refs: Vec<&[i64]> = NORMALS[..m].iter().map(|r| r.as_slice()).collect();
        Arrangement::from_integer_rows(2, &refs).expect("lines")
    }

    /// The braid arrangement on four points, essentialized by fixing `x4 = 0`.
    pub fn braid_a3() -> Arrangement {
        Arrangement::from_integer_rows(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, -1, 0], &[1, 0, -1], &[0, 1, -1]])
            .expect("A3")
    }

    /// Generic arrangement of `m` planes through the origin of 3-space.
    pub fn generic_planes(m: usize) -> Arrangement {
        const NORMALS: [[i64; 3]; 6] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [1, 3, 5]];
        assert!((1..=6).contains(&m), "generic_planes() supports 1 to 6 planes");
        let refs: Vec<&[i64]> = NORMALS[..m].iter().map(|r| r.as_slice()).collect();
        Arrangement::from_integer_rows(3, &refs).expect("generic planes")
    }
}
