//! Salvetti complexes of complexified real central arrangements.
//!
//! Cells are pairs `<C, F>` of a face `F` and a chamber `C` having `F` in its
//! closure; the cell has dimension `codim F`. Twisted boundaries carry the
//! rank-one system along minimal positive paths between chambers.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arrangement::{Arrangement, IntersectionLattice, RankOneSystem};
use crate::linalg::{complex_cohomology, CochainComplex, CohomologyReport, ExactMatrix, Rational};
use crate::{Error, Result};

pub const MAX_HYPERPLANES: usize = 8;
pub const MAX_DIMENSION: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

/// Position of a face relative to each hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<Sign>);

impl SignVector {
    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&s| s == Sign::Zero).count()
    }

    pub fn is_chamber(&self) -> bool {
        self.zeros() == 0
    }

    /// Face order: `self <= other` when `other` refines `self`.
    pub fn leq(&self, other: &SignVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == Sign::Zero || a == b)
    }

    /// The composition `self ∘ other`: signs of `self`, filled in from `other` where zero.
    pub fn compose(&self, other: &SignVector) -> SignVector {
        SignVector(self.0.iter().zip(&other.0).map(|(&a, &b)| if a == Sign::Zero { b } else { a }).collect())
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Sign::Neg => "-",
                Sign::Zero => "0",
                Sign::Pos => "+",
            })?;
        }
        Ok(())
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FacePoset {
    /// Faces sorted by dimension, then sign vector.
    pub faces: Vec<SignVector>,
    /// Dimension of each face as a cone.
    pub dims: Vec<usize>,
    pub n: usize,
    #[serde(skip)]
    index: HashMap<SignVector, usize>,
}

impl FacePoset {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, v: &SignVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn chambers(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.faces[i].is_chamber()).collect()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.faces[i].leq(&self.faces[j])
    }

    /// Faces covering `i`, one dimension up.
    pub fn covers_of(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.dims[j] == self.dims[i] + 1 && self.leq(i, j)).collect()
    }

    /// Number of faces of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.n + 1];
        for &d in &self.dims {
            f[d] += 1;
        }
        f
    }
}

// Normalizes so the first nonzero coefficient has absolute value one.
fn normalize(v: Vec<Rational>) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let s = p.abs();
            v.iter().map(|x| x / &s).collect()
        }
        None => v,
    }
}

/// Decides whether `g(c) > 0` for every row `g` has a solution, by
/// Fourier–Motzkin elimination.
fn strictly_feasible(rows: &[Vec<Rational>]) -> bool {
    let nvars = rows.first().map_or(0, Vec::len);
    let mut current: Vec<Vec<Rational>> = rows.iter().cloned().map(normalize).collect();
    current.sort();
    current.dedup();
    for k in 0..nvars {
        if current.iter().any(|r| r.iter().all(Zero::is_zero)) {
            return false;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in current {
            if r[k].is_positive() {
                pos.push(r);
            } else if r[k].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                let a = -&q[k];
                let b = p[k].clone();
                let combo: Vec<Rational> = p.iter().zip(q).map(|(x, y)| x * &a + y * &b).collect();
                rest.push(normalize(combo));
            }
        }
        rest.sort();
        rest.dedup();
        current = rest;
    }
    current.iter().all(|r| r.iter().any(|x| !x.is_zero()))
}

fn check_scale(a: &Arrangement) -> Result<()> {
    if a.len() > MAX_HYPERPLANES || a.n() > MAX_DIMENSION {
        return Err(Error::ScaleLimit(format!(
            "{} hyperplanes in dimension {}; the face enumeration supports at most {MAX_HYPERPLANES} and {MAX_DIMENSION}",
            a.len(),
            a.n()
        )));
    }
    Ok(())
}

/// Enumerates every realizable sign vector, flat by flat.
///
/// On a flat `X` with kernel basis `b_1..b_d` the other hyperplanes restrict
/// to nonzero forms in `c`; a sign pattern is realizable when the strict
/// system `s_i g_i(c) > 0` is feasible, which is decided one hyperplane at a
/// time so infeasible prefixes are pruned.
pub fn enumerate_faces(a: &Arrangement) -> Result<FacePoset> {
    check_scale(a)?;
    let lattice = IntersectionLattice::new(a)?;
    let m = a.len();
    let mut faces = Vec::new();
    for flat in lattice.flats() {
        let basis = &flat.kernel_basis;
        let others: Vec<usize> = (0..m).filter(|h| flat.closed_set.binary_search(h).is_err()).collect();
        let forms: Vec<Vec<Rational>> = others
            .iter()
            .map(|&h| {
                let row = a.normals().row(h);
                basis.iter().map(|b| b.iter().zip(row).map(|(x, y)| x * y).sum()).collect()
            })
            .collect();
        let mut stack: Vec<Vec<Sign>> = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == others.len() {
                let mut v = vec![Sign::Zero; m];
                for (k, &h) in others.iter().enumerate() {
                    v[h] = prefix[k];
                }
                faces.push((basis.len(), SignVector(v)));
                continue;
            }
            for s in [Sign::Neg, Sign::Pos] {
                let mut next = prefix.clone();
                next.push(s);
                let rows: Vec<Vec<Rational>> = next
                    .iter()
                    .zip(&forms)
                    .map(|(s, f)| if *s == Sign::Pos { f.clone() } else { f.iter().map(|x| -x).collect() })
                    .collect();
                if strictly_feasible(&rows) {
                    stack.push(next);
                }
            }
        }
    }
    faces.sort();
    let index = faces.iter().enumerate().map(|(i, (_, v))| (v.clone(), i)).collect();
    let (dims, faces) = faces.into_iter().unzip();
    Ok(FacePoset { faces, dims, n: a.n(), index })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SalvettiCell {
    pub face: usize,
    pub chamber: usize,
}

#[derive(Clone, Debug)]
pub struct SalvettiComplexData {
    pub faces: FacePoset,
    /// Cells grouped by dimension.
    pub cells: Vec<Vec<SalvettiCell>>,
    /// `boundary[k]` maps `k+1`-cells to `k`-cells (shape `|cells[k]| x |cells[k+1]|`).
    pub boundary: Vec<ExactMatrix>,
    pub system: RankOneSystem,
}

/// Incidence numbers of the dual zonotope, where the cell of a face `F` has
/// the faces covering `F` on its boundary. Signs are fixed cell by cell by a
/// breadth-first walk across codimension-two faces, forcing `∂∂ = 0`.
fn zonotope_incidences(fp: &FacePoset) -> Result<HashMap<(usize, usize), i64>> {
    let mut eps: HashMap<(usize, usize), i64> = HashMap::new();
    let mut order: Vec<usize> = (0..fp.len()).collect();
    order.sort_by_key(|&f| std::cmp::Reverse(fp.dims[f]));
    for f in order {
        let facets = fp.covers_of(f);
        if facets.is_empty() {
            continue;
        }
        let codim = fp.n - fp.dims[f];
        if codim == 1 {
            for (k, &g) in facets.iter().enumerate() {
                eps.insert((f, g), if k == 0 { 1 } else { -1 });
            }
            continue;
        }
        let mut sign: BTreeMap<usize, i64> = BTreeMap::from([(facets[0], 1)]);
        let mut queue = VecDeque::from([facets[0]]);
        while let Some(g1) = queue.pop_front() {
            for k in fp.covers_of(g1) {
                for &g2 in &facets {
                    if g2 == g1 || !fp.leq(g2, k) {
                        continue;
                    }
                    let forced = -sign[&g1] * eps[&(g1, k)] * eps[&(g2, k)];
                    match sign.get(&g2) {
                        Some(&s) if s != forced => return Err(Error::SalvettiBoundary(codim)),
                        Some(_) => {}
                        None => {
                            sign.insert(g2, forced);
                            queue.push_back(g2);
                        }
                    }
                }
            }
        }
        if sign.len() != facets.len() {
            return Err(Error::SalvettiBoundary(codim));
        }
        for (g, s) in sign {
            eps.insert((f, g), s);
        }
    }
    Ok(eps)
}

/// Transport from chamber `c` to chamber `d` along a minimal positive path:
/// crossing hyperplane `i` from its positive side contributes `q_i`, from
/// the negative side `1`, so the loop around `H_i` has monodromy `q_i`.
fn transport(sys: &RankOneSystem, c: &SignVector, d: &SignVector) -> Rational {
    let mut w = Rational::one();
    for (i, (x, y)) in c.0.iter().zip(&d.0).enumerate() {
        if x != y && *x == Sign::Pos {
            w = sys.field.mul(&w, &sys.weights[i]);
        }
    }
    w
}

pub fn build_salvetti(fp: FacePoset, sys: &RankOneSystem) -> Result<SalvettiComplexData> {
    let n = fp.n;
    let m = fp.faces.first().map_or(0, |f| f.0.len());
    if sys.weights.len() != m {
        return Err(Error::ShapeMismatch(format!("{} weights for {m} hyperplanes", sys.weights.len())));
    }
    if fp.dims.iter().min() != Some(&0) {
        return Err(Error::NotEssential { rank: n - fp.dims.iter().min().copied().unwrap_or(0), n });
    }
    let chambers = fp.chambers();
    let mut cells: Vec<Vec<SalvettiCell>> = vec![Vec::new(); n + 1];
    let mut cell_index: HashMap<(usize, usize), usize> = HashMap::new();
    for f in 0..fp.len() {
        let k = n - fp.dims[f];
        for &c in &chambers {
            if fp.leq(f, c) {
                cell_index.insert((f, c), cells[k].len());
                cells[k].push(SalvettiCell { face: f, chamber: c });
            }
        }
    }
    let eps = zonotope_incidences(&fp)?;
    let field = sys.field;
    let mut boundary = Vec::with_capacity(n);
    for k in 0..n {
        let mut d = ExactMatrix::zeros(cells[k].len(), cells[k + 1].len());
        for (j, cell) in cells[k + 1].iter().enumerate() {
            let c = &fp.faces[cell.chamber];
            for g in fp.covers_of(cell.face) {
                let target = fp.faces[g].compose(c);
                let t = fp.index_of(&target).expect("composition of a face with a chamber is a chamber");
                let i = cell_index[&(g, t)];
                let coeff = field.mul(&field.from_i64(eps[&(cell.face, g)]), &transport(sys, c, &target));
                d[(i, j)] = field.add(&d[(i, j)], &coeff);
            }
        }
        boundary.push(d);
    }
    for k in 1..n {
        let dd = boundary[k - 1].mul(&boundary[k])?;
        for i in 0..dd.rows() {
            for j in 0..dd.cols() {
                if !field.is_zero(&field.reduce(&dd[(i, j)])?) {
                    return Err(Error::SalvettiBoundary(k + 1));
                }
            }
        }
    }
    Ok(SalvettiComplexData { faces: fp, cells, boundary, system: sys.clone() })
}

impl SalvettiComplexData {
    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// The dual cochain complex over the system field.
    pub fn cochain_complex(&self) -> Result<CochainComplex> {
        let diffs = self.boundary.iter().map(ExactMatrix::transpose).collect();
        CochainComplex::new(self.system.field.into(), 0, self.cell_counts(), diffs)
    }

    pub fn cohomology(&self) -> Result<CohomologyReport> {
        complex_cohomology(&self.cochain_complex()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedCohomology {
    /// Cohomology of the complement `M`.
    pub complement: CohomologyReport,
    /// Dimensions `u_0..u_{n-1}` for the projectivized complement `U`,
    /// solved from `h_p(M) = u_p + u_{p-1}`.
    pub projectivized: Option<Vec<usize>>,
}

impl TwistedCohomology {
    pub fn projectivized_degrees(&self) -> Vec<i64> {
        self.projectivized
            .as_ref()
            .map(|u| (0..u.len()).filter(|&p| u[p] != 0).map(|p| p as i64).collect())
            .unwrap_or_default()
    }
}

/// Twisted cohomology of the complement; with `projectivized` set, also the
/// dimensions for the projectivized complement, which needs a projective system.
pub fn twisted_cohomology(a: &Arrangement, sys: &RankOneSystem, projectivized: bool) -> Result<TwistedCohomology> {
    a.require_essential()?;
    if projectivized && !sys.is_projective() {
        let all: Vec<usize> = (0..a.len()).collect();
        return Err(Error::NonProjective(crate::linalg::format_rational(&sys.product(&all))));
    }
    let data = build_salvetti(enumerate_faces(a)?, sys)?;
    let complement = data.cohomology()?;
    let projectivized = if projectivized { Some(split_circle_factor(&complement, a.n())?) } else { None };
    Ok(TwistedCohomology { complement, projectivized })
}

/// Solves `h_p = u_p + u_{p-1}` with `u_{-1} = 0` for `p < n`, and checks
/// the last equation `h_n = u_{n-1}`.
pub fn split_circle_factor(report: &CohomologyReport, n: usize) -> Result<Vec<usize>> {
    let mut u: Vec<usize> = Vec::with_capacity(n);
    for p in 0..n {
        let prev = if p == 0 { 0 } else { u[p - 1] };
        let h = report.rank(p as i64);
        if h < prev {
            return Err(Error::Invalid(format!("h_{p} = {h} is smaller than u_{} = {prev}", p as i64 - 1)));
        }
        u.push(h - prev);
    }
    let last = if n == 0 { 0 } else { u[n - 1] };
    if report.rank(n as i64) != last {
        return Err(Error::Invalid(format!("h_{n} = {} differs from u_{} = {last}", report.rank(n as i64), n - 1)));
    }
    Ok(u)
}
