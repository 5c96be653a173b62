//! Arrangements in a product of elliptic curves cut out by integer matrices.
//!
//! `E` is modelled as `(R/Z)^2`, so an integer matrix acts on both real
//! coordinates separately and `ker A_I` has component group `∏ (Z/d_i)^2`
//! for the nonzero elementary divisors `d_i`. Components are carried as a
//! torsion point together with the rows whose hyperplanes contain them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::{
    vanishing_check, Arrangement, IntersectionLattice, RankOneSystem, VanishingMode, WeightsJson,
};
use crate::covers::{e2_support, E2Support, LocalDatum};
use crate::linalg::{rank, smith_normal_form, FieldTag, IntMatrix, Matrix, Rational, Scalar};
use crate::poset::FinitePoset;
use crate::{Error, Result};

pub const MAX_HYPERPLANES: usize = 12;
pub const MAX_COMPONENTS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticArrangement {
    n: usize,
    labels: Vec<String>,
    matrix: IntMatrix,
    /// `(c, m)`: the translation is the `m`-torsion point of index `c`.
    translations: Vec<Option<(u64, u64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TranslationJson {
    Torsion([u64; 2]),
    Zero(u64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipticJson {
    pub n: usize,
    pub rows: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translations: Option<Vec<TranslationJson>>,
    /// Field of the character values; rational when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<Vec<Scalar>>,
}

impl EllipticArrangement {
    pub fn new(n: usize, labels: Vec<String>, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::ShapeMismatch(format!("{} labels for {} rows", labels.len(), rows.len())));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let matrix = Matrix::from_rows(rows, n)?;
        for i in 0..matrix.rows() {
            if matrix.row(i).iter().all(Zero::is_zero) {
                return Err(Error::ZeroNormal(labels[i].clone()));
            }
        }
        let translations = vec![None; labels.len()];
        Ok(EllipticArrangement { n, labels, matrix, translations })
    }

    /// Subgroup arrangement with labels `H1, H2, ...`.
    pub fn from_rows(n: usize, rows: &[&[i64]]) -> Result<Self> {
        let labels = (1..=rows.len()).map(|i| format!("H{i}")).collect();
        Self::new(n, labels, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn from_json(json: &EllipticJson) -> Result<Self> {
        let labels = json.labels.clone().unwrap_or_else(|| (1..=json.rows.len()).map(|i| format!("H{i}")).collect());
        let rows = json.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut a = Self::new(json.n, labels, rows)?;
        if let Some(ts) = &json.translations {
            if ts.len() != a.len() {
                return Err(Error::ShapeMismatch(format!("{} translations for {} rows", ts.len(), a.len())));
            }
            a.translations = ts
                .iter()
                .map(|t| match *t {
                    TranslationJson::Zero(0) => Ok(None),
                    TranslationJson::Zero(x) => Err(Error::Invalid(format!("translation {x} must be 0 or [c, m]"))),
                    TranslationJson::Torsion([_, 0]) => Err(Error::Invalid("torsion order must be positive".into())),
                    TranslationJson::Torsion([c, m]) => Ok((c % m != 0).then_some((c, m))),
                })
                .collect::<Result<_>>()?;
        }
        Ok(a)
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

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_subgroup(&self) -> bool {
        self.translations.iter().all(Option::is_none)
    }

    fn require_subgroup(&self) -> Result<()> {
        if self.is_subgroup() {
            Ok(())
        } else {
            Err(Error::TranslatedArrangement)
        }
    }

    fn rational_rows(&self, rows: &[usize]) -> Matrix<Rational> {
        let m = self.matrix.select_rows(rows).map(|x| Rational::from_integer(x.clone()));
        if rows.is_empty() {
            Matrix::zeros(0, self.n)
        } else {
            m
        }
    }

    pub fn rank_of(&self, rows: &[usize]) -> usize {
        rank(&self.rational_rows(rows), &FieldTag::Rational).expect("rational rank")
    }

    pub fn rank(&self) -> usize {
        self.rank_of(&(0..self.len()).collect::<Vec<_>>())
    }

    pub fn corank(&self) -> usize {
        self.n - self.rank()
    }

    /// Smith form of the rows `I`; the empty selection gives the identity.
    fn smith(&self, rows: &[usize]) -> Smith {
        if rows.is_empty() {
            return Smith { divisors: Vec::new(), right: IntMatrix::identity(self.n) };
        }
        let s = smith_normal_form(&self.matrix.select_rows(rows));
        Smith { divisors: s.diag, right: s.right }
    }

    fn check_scale(&self) -> Result<()> {
        if self.len() > MAX_HYPERPLANES {
            return Err(Error::ScaleLimit(format!("{} hyperplanes, at most {MAX_HYPERPLANES} supported", self.len())));
        }
        Ok(())
    }
}

struct Smith {
    divisors: Vec<BigInt>,
    /// Unimodular; `ker A_I` is the image of `{y : d_i y_i = 0}` under it.
    right: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub rank: usize,
    pub corank: usize,
    pub essential: bool,
    pub unimodular: bool,
    /// Dimension of a CW model of the complement, `n + corank`.
    pub homotopy_dim: usize,
}

/// Unimodular means every row subset has all elementary divisors equal to 1,
/// so every intersection is connected.
pub fn analyze(a: &EllipticArrangement) -> Result<Analysis> {
    a.check_scale()?;
    let m = a.len();
    let unimodular = (1u32..(1 << m)).all(|mask| {
        let rows: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        a.smith(&rows).divisors.iter().all(One::is_one)
    });
    let rank = a.rank();
    let corank = a.n - rank;
    Ok(Analysis { rank, corank, essential: corank == 0, unimodular, homotopy_dim: a.n + corank })
}

/// A connected component of `∩_{i ∈ I} H_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticComponent {
    /// The rows `I` whose intersection this is a component of.
    pub rows: Vec<usize>,
    /// Nonzero elementary divisors of `A_I`.
    pub divisors: Vec<u64>,
    /// Position `(a_i, b_i)` in `∏ (Z/d_i)^2`.
    pub torsion: Vec<(u64, u64)>,
    /// Mixed-radix index of `torsion` in the component group.
    pub index: usize,
    pub dim: usize,
    /// A torsion point of the component, as its two real coordinates mod 1.
    #[serde(skip)]
    pub point: (Vec<Rational>, Vec<Rational>),
}

fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

fn apply(m: &IntMatrix, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows()).map(|i| m.row(i).iter().zip(v).map(|(a, x)| x * Rational::from_integer(a.clone())).sum()).collect()
}

// Gauss–Jordan inverse of a unimodular integer matrix.
fn inverse(m: &IntMatrix) -> Matrix<Rational> {
    let n = m.rows();
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r: Vec<Rational> = m.row(i).iter().map(|x| Rational::from_integer(x.clone())).collect();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !rows[i][c].is_zero()).expect("unimodular matrix is invertible");
        rows.swap(c, p);
        let inv = rows[c][c].recip();
        for x in rows[c].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Matrix::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect(), n).expect("square")
}

fn divisors_u64(d: &[BigInt]) -> Result<Vec<u64>> {
    d.iter().map(|x| x.to_u64().ok_or_else(|| Error::ScaleLimit(format!("elementary divisor {x}")))).collect()
}

/// Number of components of `∩_{i ∈ I} H_i` in the subgroup case: `(∏ d_i)^2`.
pub fn component_count(a: &EllipticArrangement, rows: &[usize]) -> Result<u128> {
    a.require_subgroup()?;
    let d = divisors_u64(&a.smith(rows).divisors)?;
    let prod = d.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x as u128));
    prod.and_then(|p| p.checked_mul(p)).ok_or_else(|| Error::ScaleLimit("component count overflows".into()))
}

/// Components of `∩_{i ∈ I} H_i`, one per element of `∏ (Z/d_i)^2`.
pub fn components(a: &EllipticArrangement, rows: &[usize]) -> Result<Vec<EllipticComponent>> {
    let mut rows = rows.to_vec();
    rows.sort_unstable();
    rows.dedup();
    if let Some(&bad) = rows.iter().find(|&&i| i >= a.len()) {
        return Err(Error::UnknownLabel(format!("#{bad}")));
    }
    let count = component_count(a, &rows)?;
    if count > MAX_COMPONENTS as u128 {
        return Err(Error::ScaleLimit(format!("{count} components, at most {MAX_COMPONENTS} supported")));
    }
    let s = a.smith(&rows);
    let d = divisors_u64(&s.divisors)?;
    let dim = a.n - d.len();
    let r = d.len();
    // mixed radix over (a_1..a_r, b_1..b_r)
    let radices: Vec<u64> = d.iter().chain(&d).copied().collect();
    let mut out = Vec::with_capacity(count as usize);
    for index in 0..count as usize {
        let mut rest = index as u64;
        let mut digits = Vec::with_capacity(2 * r);
        for &m in &radices {
            digits.push(rest % m);
            rest /= m;
        }
        let coords = |off: usize| -> Vec<Rational> {
            let y: Vec<Rational> = (0..a.n)
                .map(|i| if i < r { Rational::new(digits[off + i].into(), d[i].into()) } else { Rational::zero() })
                .collect();
            apply(&s.right, &y).iter().map(frac).collect()
        };
        let point = (coords(0), coords(r));
        let torsion = (0..r).map(|i| (digits[i], digits[r + i])).collect();
        out.push(EllipticComponent { rows: rows.clone(), divisors: d.clone(), torsion, index, dim, point });
    }
    Ok(out)
}

/// Index of the component of `∩_{i ∈ I} H_i` through a torsion point of it.
fn component_index(a: &EllipticArrangement, rows: &[usize], point: &(Vec<Rational>, Vec<Rational>)) -> usize {
    let s = a.smith(rows);
    let inv = inverse(&s.right);
    let digit = |u: &[Rational], i: usize, d: &BigInt| -> u64 {
        let y: Rational = inv.row(i).iter().zip(u).map(|(x, v)| x * v).sum();
        let t = y * Rational::from_integer(d.clone());
        debug_assert!(t.is_integer());
        t.to_integer().mod_floor(d).to_u64().unwrap()
    };
    let mut index = 0u64;
    let mut stride = 1u64;
    for coord in [&point.0, &point.1] {
        for (i, d) in s.divisors.iter().enumerate() {
            index += digit(coord, i, d) * stride;
            stride *= d.to_u64().unwrap();
        }
    }
    index as usize
}

/// Rows whose hyperplanes contain the component: the row must lie in the
/// rational span of `A_I` and vanish at the torsion point.
pub fn containing_rows(a: &EllipticArrangement, x: &EllipticComponent) -> Vec<usize> {
    let base = a.rank_of(&x.rows);
    (0..a.len())
        .filter(|&j| {
            if x.rows.binary_search(&j).is_ok() {
                return true;
            }
            let mut with = x.rows.clone();
            with.push(j);
            let row: Vec<Rational> = a.matrix.row(j).iter().map(|v| Rational::from_integer(v.clone())).collect();
            let vanishes =
                |u: &[Rational]| row.iter().zip(u).map(|(c, v)| c * v).sum::<Rational>().is_integer();
            a.rank_of(&with) == base && vanishes(&x.point.0) && vanishes(&x.point.1)
        })
        .collect()
}

/// The poset `P(A)` of components of intersections (the ambient space
/// included), ordered by inclusion and ranked by complex dimension.
#[derive(Clone, Debug)]
pub struct EllipticPoset {
    /// Each component is listed under the full set of rows containing it.
    pub components: Vec<EllipticComponent>,
    pub poset: FinitePoset,
    pub rho: Vec<i64>,
}

pub fn component_label(a: &EllipticArrangement, x: &EllipticComponent) -> String {
    let names: Vec<&str> = x.rows.iter().map(|&i| a.labels[i].as_str()).collect();
    let base = format!("{{{}}}", names.join(","));
    if x.divisors.iter().all(|&d| d == 1) {
        base
    } else {
        format!("{base}#{}", x.index)
    }
}

pub fn intersection_poset(a: &EllipticArrangement) -> Result<EllipticPoset> {
    a.require_subgroup()?;
    a.check_scale()?;
    let m = a.len();
    let mut comps = Vec::new();
    for mask in 0u32..(1 << m) {
        let rows: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        for x in components(a, &rows)? {
            if containing_rows(a, &x) == rows {
                comps.push(x);
            }
            if comps.len() > MAX_COMPONENTS {
                return Err(Error::ScaleLimit(format!("more than {MAX_COMPONENTS} components")));
            }
        }
    }
    comps.sort_by(|x, y| (x.dim, &x.rows, x.index).cmp(&(y.dim, &y.rows, y.index)));
    let labels: Vec<String> = comps.iter().map(|x| component_label(a, x)).collect();
    let mut rel = Vec::new();
    for (i, x) in comps.iter().enumerate() {
        for (j, y) in comps.iter().enumerate() {
            let inside = x.dim < y.dim
                && y.rows.iter().all(|r| x.rows.binary_search(r).is_ok())
                && component_index(a, &y.rows, &x.point) == y.index;
            if inside {
                rel.push((i, j));
            }
        }
    }
    let rho: Vec<i64> = comps.iter().map(|x| x.dim as i64).collect();
    let poset = FinitePoset::from_index_relations(labels, &rel)?.with_rank(rho.clone())?;
    Ok(EllipticPoset { components: comps, poset, rho })
}

/// Tangent hyperplanes at a component. Proportional rows give the same
/// tangent hyperplane; they are merged and their weights multiply.
#[derive(Clone, Debug)]
pub struct TangentArrangement {
    /// Central arrangement in `C^n`.
    pub arrangement: Arrangement,
    /// Elliptic rows behind each tangent hyperplane.
    pub groups: Vec<Vec<usize>>,
}

impl TangentArrangement {
    pub fn restrict(&self, sys: &RankOneSystem) -> RankOneSystem {
        RankOneSystem { field: sys.field, weights: self.groups.iter().map(|g| sys.product(g)).collect() }
    }
}

pub fn tangent_arrangement(a: &EllipticArrangement, x: &EllipticComponent) -> Result<TangentArrangement> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for j in containing_rows(a, x) {
        match groups.iter_mut().find(|g| a.rank_of(&[g[0], j]) == 1) {
            Some(g) => g.push(j),
            None => groups.push(vec![j]),
        }
    }
    let labels = groups
        .iter()
        .map(|g| g.iter().map(|&i| a.labels[i].as_str()).collect::<Vec<_>>().join("|"))
        .collect();
    let normals = groups.iter().map(|g| a.rational_rows(&[g[0]]).row(0).to_vec()).collect();
    Ok(TangentArrangement { arrangement: Arrangement::new(a.n, labels, normals)?, groups })
}

/// A character of `H_1(E^n) = Z^{2n}`, listed as `(α_1, β_1, ..., α_n, β_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub field: FieldTag,
    pub values: Vec<Rational>,
}

impl Character {
    pub fn new(field: FieldTag, values: Vec<Rational>, n: usize) -> Result<Self> {
        field.validate()?;
        if values.len() != 2 * n {
            return Err(Error::ShapeMismatch(format!("character needs {} values, got {}", 2 * n, values.len())));
        }
        let values = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let v = field.reduce(v)?;
                if field.is_zero(&v) {
                    return Err(Error::ZeroWeight(format!("character value {i}")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Character { field, values })
    }

    pub fn from_i64(field: FieldTag, values: &[i64], n: usize) -> Result<Self> {
        Self::new(field, values.iter().map(|&v| Rational::from_integer(v.into())).collect(), n)
    }

    /// Value on the lattice vector `k ⊗ e_c` for `c` in `{α, β}`.
    fn value(&self, k: &[BigInt], c: usize) -> Rational {
        k.iter().enumerate().fold(Rational::one(), |acc, (j, e)| {
            let e = e.to_i64().expect("small kernel entries");
            let v = self.field.pow(&self.values[2 * j + c], e).expect("nonzero values");
            self.field.mul(&acc, &v)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvenientVerdict {
    pub holds: bool,
    /// Positive-dimensional components on which the character is trivial.
    pub failing: Vec<String>,
    pub conclusion: Option<String>,
}

/// Checks that the character is nontrivial on the lattice
/// `ker_Z(A_I) ⊗ Z^2` of every positive-dimensional component, which is
/// the condition for its cohomology on that torus coset to vanish.
pub fn convenient_check(a: &EllipticArrangement, chi: &Character) -> Result<ConvenientVerdict> {
    a.require_subgroup()?;
    if chi.values.len() != 2 * a.n {
        return Err(Error::ShapeMismatch(format!("character needs {} values", 2 * a.n)));
    }
    let p = intersection_poset(a)?;
    let mut verdict_by_rows: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    let mut failing = Vec::new();
    for x in p.components.iter().filter(|x| x.dim > 0) {
        let nontrivial = *verdict_by_rows.entry(x.rows.clone()).or_insert_with(|| {
            let s = a.smith(&x.rows);
            let r = s.divisors.len();
            (r..a.n).any(|col| {
                let k: Vec<BigInt> = (0..a.n).map(|i| s.right[(i, col)].clone()).collect();
                (0..2).any(|c| !chi.field.is_one(&chi.value(&k, c)))
            })
        });
        if !nontrivial {
            failing.push(component_label(a, x));
        }
    }
    let holds = failing.is_empty();
    let conclusion = holds.then(|| format!("H^p(U, chi) = 0 for 0 <= p <= {}", a.n as i64 - 1));
    Ok(ConvenientVerdict { holds, failing, conclusion })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumCheck {
    pub component: String,
    pub dim: usize,
    pub holds: bool,
    pub failing_flats: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticCertificate {
    pub support: E2Support,
    pub strata: Vec<StratumCheck>,
    /// Statements read off the certificate; none of them is computed.
    pub annotations: Vec<String>,
}

/// E2 support for the cover of an essential elliptic complement by
/// neighbourhoods of components `X` with `ρ(X) = dim X`.
///
/// The coefficient factor is the cohomology of the tangent complement, in
/// degree `q + ρ ∈ [0, n - ρ]`, cut down to `q = n - 2ρ` when the tangent
/// arrangement passes the top-inclusive vanishing check. The Stein
/// restriction puts the compact-support factor in `p - ρ ∈ [ρ, 2ρ]`, and
/// total degrees above `n` vanish.
pub fn elliptic_vanishing_certificate(a: &EllipticArrangement, sys: &RankOneSystem) -> Result<EllipticCertificate> {
    let corank = a.corank();
    if corank != 0 {
        return Err(Error::NotEssential { rank: a.rank(), n: a.n });
    }
    if sys.weights.len() != a.len() {
        return Err(Error::ShapeMismatch(format!("{} weights for {} hyperplanes", sys.weights.len(), a.len())));
    }
    let p = intersection_poset(a)?;
    let n = a.n as i64;
    let mut data = Vec::new();
    let mut strata = Vec::new();
    for (x, &rho) in p.components.iter().zip(&p.rho) {
        let t = tangent_arrangement(a, x)?;
        let local = t.restrict(sys);
        let ess = t.arrangement.essentialize();
        let verdict = vanishing_check(&IntersectionLattice::new(&ess)?, &local, VanishingMode::IncludeTop)?;
        let label = component_label(a, x);
        let coeff_support = if verdict.holds { BTreeSet::from([n - 2 * rho]) } else { (-rho..=n - 2 * rho).collect() };
        data.push(LocalDatum { x: label.clone(), coeff_support, base_support: (rho..=2 * rho).collect() });
        strata.push(StratumCheck { component: label, dim: x.dim, holds: verdict.holds, failing_flats: verdict.failing_flats });
    }
    let support = e2_support(&p.poset, &p.rho, &data, Some(n))?;
    let mut annotations = vec![
        "weights are assigned per elliptic hyperplane and restricted to tangent arrangements; rank-one systems not of this form are not covered".to_string(),
    ];
    if support.concentration.as_ref().is_some_and(|c| c.line == n) {
        annotations.push(format!("H^i(U, A) = 0 for i != {n}"));
        annotations.push(format!(
            "the complement is a duality space and an abelian duality space of dimension {n} (group-ring statement, not computed)"
        ));
    }
    Ok(EllipticCertificate { support, strata, annotations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::E2State;

    fn ell(n: usize, rows: &[&[i64]]) -> EllipticArrangement {
        EllipticArrangement::from_rows(n, rows).unwrap()
    }

    // Solutions of A x = 0 in (Z/M)^n for one real coordinate, divided by the
    // M-torsion of the identity component, then squared for E = (R/Z)^2.
    fn brute_force_components(rows: &[Vec<i64>], n: usize, m: i64) -> u128 {
        let total = (m as usize).pow(n as u32);
        let mut solutions = 0u128;
        for code in 0..total {
            let x: Vec<i64> = (0..n).map(|i| (code / (m as usize).pow(i as u32)) as i64 % m).collect();
            if rows.iter().all(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>().rem_euclid(m) == 0) {
                solutions += 1;
            }
        }
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let k = n - EllipticArrangement::from_rows(n, &refs).unwrap().rank();
        let per = solutions / (m as u128).pow(k as u32);
        per * per
    }

    #[test]
    fn analysis_examples() {
        let a = analyze(&ell(2, &[&[1, -1]])).unwrap();
        assert_eq!((a.corank, a.essential, a.unimodular, a.homotopy_dim), (1, false, true, 3));
        let a = analyze(&ell(1, &[&[2]])).unwrap();
        assert_eq!((a.corank, a.essential, a.unimodular, a.homotopy_dim), (0, true, false, 1));
        let a = analyze(&ell(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert!(a.essential && a.unimodular);
    }

    #[test]
    fn component_examples() {
        let a = ell(1, &[&[2]]);
        let c = components(&a, &[0]).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|x| x.dim == 0));
        let a = ell(2, &[&[1, -1]]);
        let c = components(&a, &[0]).unwrap();
        assert_eq!((c.len(), c[0].dim), (1, 1));
        assert_eq!(components(&a, &[]).unwrap().len(), 1);
    }

    #[test]
    fn smith_count_matches_brute_force() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2]],
            vec![vec![3, 0], vec![0, 2]],
            vec![vec![2, 2]],
            vec![vec![1, 2], vec![3, -1]],
            vec![vec![2, 0, 0], vec![0, 2, 2]],
        ];
        for rows in cases {
            let n = rows[0].len();
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let a = ell(n, &refs);
            let all: Vec<usize> = (0..rows.len()).collect();
            let s = smith_normal_form(&a.matrix().select_rows(&all));
            let m = s.diag.iter().fold(BigInt::one(), |acc, d| acc.lcm(d)).to_i64().unwrap();
            assert_eq!(component_count(&a, &all).unwrap(), brute_force_components(&rows, n, m), "{rows:?}");
        }
    }

    #[test]
    fn torsion_points_lie_on_their_components() {
        let a = ell(2, &[&[2, 1], &[1, 3]]);
        for x in components(&a, &[0, 1]).unwrap() {
            assert_eq!(containing_rows(&a, &x), vec![0, 1]);
            assert_eq!(component_index(&a, &[0, 1], &x.point), x.index);
        }
    }

    #[test]
    fn poset_of_doubled_point() {
        // 2x = 0 and x = 0: four 2-torsion points, only the origin lies on both
        let a = ell(1, &[&[2], &[1]]);
        let p = intersection_poset(&a).unwrap();
        let mut labels: Vec<&str> = p.poset.labels().iter().map(String::as_str).collect();
        labels.sort();
        assert_eq!(labels, vec!["{H1,H2}", "{H1}#1", "{H1}#2", "{H1}#3", "{}"]);
        let origin = p.poset.index_of("{H1,H2}").unwrap();
        let t = tangent_arrangement(&a, &p.components[origin]).unwrap();
        assert_eq!(t.groups, vec![vec![0, 1]]);
        assert_eq!(t.arrangement.labels(), &["H1|H2".to_string()]);
    }

    #[test]
    fn tangent_arrangements() {
        let a = ell(2, &[&[1, -1]]);
        let x = &components(&a, &[0]).unwrap()[0];
        let t = tangent_arrangement(&a, x).unwrap();
        assert_eq!(t.arrangement.len(), 1);
        // F(E, 3): the small diagonal has the braid arrangement as tangent
        let f = ell(3, &[&[1, -1, 0], &[1, 0, -1], &[0, 1, -1]]);
        let x = &components(&f, &[0, 1]).unwrap()[0];
        assert_eq!(x.dim, 1);
        let t = tangent_arrangement(&f, x).unwrap();
        assert_eq!((t.arrangement.len(), t.arrangement.rank()), (3, 2));
        assert_eq!(t.arrangement.rank() + x.dim, 3);
    }

    #[test]
    fn convenient_examples() {
        let a = ell(2, &[&[1, -1]]);
        let f = FieldTag::Prime(7);
        let check = |v: &[i64]| convenient_check(&a, &Character::from_i64(f, v, 2).unwrap()).unwrap().holds;
        // diagonal lattice spanned by (1,0,1,0) and (0,1,0,1)
        assert!(check(&[2, 1, 3, 1]));
        assert!(!check(&[2, 3, 4, 5]));
        assert!(check(&[2, 3, 4, 6]));
        assert!(!check(&[1, 1, 1, 1]));
        let id = ell(2, &[&[1, 0], &[0, 1]]);
        let chi = Character::from_i64(f, &[2, 1, 3, 1], 2).unwrap();
        let v = convenient_check(&id, &chi).unwrap();
        assert!(v.holds);
        assert_eq!(v.conclusion.as_deref(), Some("H^p(U, chi) = 0 for 0 <= p <= 1"));
    }

    #[test]
    fn certificate_for_a_punctured_curve() {
        let a = ell(1, &[&[1]]);
        let f = FieldTag::Prime(7);
        let c = elliptic_vanishing_certificate(&a, &RankOneSystem::from_i64(f, &[3], a.labels()).unwrap()).unwrap();
        assert_eq!(c.support.concentration.as_ref().map(|c| c.line), Some(1));
        assert_eq!(c.support.state(0, 1), E2State::PossiblyNonzero);
        let c = elliptic_vanishing_certificate(&a, &RankOneSystem::trivial(f, 1)).unwrap();
        assert!(c.support.concentration.is_none());
    }

    #[test]
    fn certificate_for_reduced_configuration_space() {
        // F(E, 3) with x3 = 0: rows x1 - x2, x1, x2
        let a = ell(2, &[&[1, -1], &[1, 0], &[0, 1]]);
        let f = FieldTag::Prime(101);
        let c = elliptic_vanishing_certificate(&a, &RankOneSystem::from_i64(f, &[2, 3, 5], a.labels()).unwrap()).unwrap();
        assert!(c.strata.iter().all(|s| s.holds));
        assert_eq!(c.support.concentration.as_ref().map(|c| c.line), Some(2));
        // q1 q2 q3 = 1 makes the origin fail
        let c = elliptic_vanishing_certificate(&a, &RankOneSystem::from_i64(f, &[2, 3, 17], a.labels()).unwrap()).unwrap();
        assert!(c.strata.iter().any(|s| !s.holds));
        assert!(c.support.concentration.is_none());
    }

    #[test]
    fn non_essential_and_translated_are_refused() {
        let a = ell(2, &[&[1, -1]]);
        assert!(matches!(
            elliptic_vanishing_certificate(&a, &RankOneSystem::trivial(FieldTag::Rational, 1)),
            Err(Error::NotEssential { .. })
        ));
        let json: EllipticJson = serde_json::from_str(r#"{"n":1,"rows":[[1]],"translations":[[1,2]]}"#).unwrap();
        let t = EllipticArrangement::from_json(&json).unwrap();
        assert!(matches!(components(&t, &[0]), Err(Error::TranslatedArrangement)));
        let json: EllipticJson = serde_json::from_str(r#"{"n":1,"rows":[[1]],"translations":[0]}"#).unwrap();
        assert!(EllipticArrangement::from_json(&json).unwrap().is_subgroup());
    }

    #[test]
    fn unimodular_means_connected() {
        let a = ell(3, &[&[1, -1, 0], &[1, 0, -1], &[0, 1, -1], &[1, 0, 0]]);
        assert!(analyze(&a).unwrap().unimodular);
        for mask in 0u32..16 {
            let rows: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
            assert_eq!(components(&a, &rows).unwrap().len(), 1);
        }
    }
}
