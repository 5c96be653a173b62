//! Finite abstract simplicial complexes: faces, links, flag complexes,
//! reduced cohomology and the Cohen–Macaulay test.

pub mod corpus;

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{complex_cohomology, CochainComplex, Coefficients, CohomologyReport, ExactMatrix, Rational};
use crate::{Error, Result};

/// A simplicial complex given by its facets.
///
/// Every listed vertex is a face: vertices not covered by a facet become
/// isolated points. The void complex has no vertices and no facets; the
/// irrelevant complex `{∅}` has no vertices and the single facet `∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    face_index: HashMap<Vec<usize>, usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmWitness {
    pub simplex: Vec<String>,
    pub degree: i64,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmVerdict {
    pub is_cm: bool,
    pub over: Coefficients,
    pub dim: i64,
    pub witnesses: Vec<CmWitness>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

impl SimplicialComplex {
    pub fn from_facets(vertices: Vec<String>, facets: &[Vec<String>]) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if index.len() != vertices.len() {
            let dup = vertices.iter().find(|v| vertices.iter().filter(|w| w == v).count() > 1).unwrap();
            return Err(Error::DuplicateLabel(dup.clone()));
        }
        let facets = facets
            .iter()
            .map(|f| {
                f.iter().map(|v| index.get(v.as_str()).copied().ok_or_else(|| Error::UnknownLabel(v.clone()))).collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        Self::from_index_facets(vertices, facets)
    }

    /// Facets given as vertex indices; duplicates inside a facet are merged.
    pub fn from_index_facets(vertices: Vec<String>, facets: Vec<Vec<usize>>) -> Result<Self> {
        let n = vertices.len();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let s: BTreeSet<usize> = f.into_iter().collect();
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::UnknownLabel(format!("#{v}")));
            }
            sets.insert(s.into_iter().collect());
        }
        for v in 0..n {
            if !sets.iter().any(|f| f.contains(&v)) {
                sets.insert(vec![v]);
            }
        }
        let all: Vec<Vec<usize>> = sets.into_iter().collect();
        let mut facets: Vec<Vec<usize>> = all
            .iter()
            .filter(|f| !all.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
            .cloned()
            .collect();
        facets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));

        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &facets {
            for mask in 0u64..(1 << f.len()) {
                faces.insert(f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        let mut faces: Vec<Vec<usize>> = faces.into_iter().collect();
        faces.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let face_index = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Ok(SimplicialComplex { vertices, facets, faces, face_index })
    }

    pub fn void() -> Self {
        Self::from_index_facets(Vec::new(), Vec::new()).expect("void complex")
    }

    pub fn irrelevant() -> Self {
        Self::from_index_facets(Vec::new(), vec![Vec::new()]).expect("irrelevant complex")
    }

    /// The full simplex on `vertices`.
    pub fn simplex(vertices: Vec<String>) -> Self {
        let all = (0..vertices.len()).collect();
        Self::from_index_facets(vertices, vec![all]).expect("simplex")
    }

    /// Flag (clique) complex of a graph.
    pub fn flag_complex(vertices: Vec<String>, edges: &[(String, String)]) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let lookup = |v: &String| index.get(v.as_str()).copied().ok_or_else(|| Error::UnknownLabel(v.clone()));
        let edges = edges.iter().map(|(a, b)| Ok((lookup(a)?, lookup(b)?))).collect::<Result<Vec<_>>>()?;
        Self::flag_complex_indexed(vertices, &edges)
    }

    pub fn flag_complex_indexed(vertices: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::UnknownLabel(format!("#{}", a.max(b))));
            }
            if a == b {
                return Err(Error::Invalid(format!("loop at vertex {}", vertices[a])));
            }
            adj[a][b] = true;
            adj[b][a] = true;
        }
        let mut cliques = Vec::new();
        bron_kerbosch(&adj, &mut Vec::new(), (0..n).collect(), Vec::new(), &mut cliques);
        if n == 0 {
            cliques.push(Vec::new());
        }
        Self::from_index_facets(vertices, cliques)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// All faces including `∅`, ordered by size then lexicographically.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    /// Dimension; `-1` for both `{∅}` and the void complex.
    pub fn dim(&self) -> i64 {
        self.faces.last().map_or(-1, |f| f.len() as i64 - 1)
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.face_index.contains_key(face)
    }

    pub fn face_position(&self, face: &[usize]) -> Option<usize> {
        self.face_index.get(face).copied()
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().all(|f| f.len() as i64 == self.dim() + 1)
    }

    /// `f[k]` counts faces with `k` vertices, so `f[0] = 1` for a nonvoid complex.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; (self.dim() + 2) as usize];
        for face in &self.faces {
            f[face.len()] += 1;
        }
        f
    }

    pub fn face_labels(&self, face: &[usize]) -> Vec<String> {
        face.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// Resolves a face given by labels, sorted by vertex index.
    pub fn face_from_labels(&self, labels: &[String]) -> Result<Vec<usize>> {
        let mut face = labels
            .iter()
            .map(|l| self.vertices.iter().position(|v| v == l).ok_or_else(|| Error::UnknownLabel(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        face.sort_unstable();
        face.dedup();
        Ok(face)
    }

    /// `lk(σ) = {τ : τ ∩ σ = ∅, τ ∪ σ ∈ L}`, on the vertices it actually uses.
    pub fn link(&self, sigma: &[usize]) -> Result<SimplicialComplex> {
        let mut sigma = sigma.to_vec();
        sigma.sort_unstable();
        sigma.dedup();
        if !self.contains(&sigma) {
            return Err(Error::NotAFace(sigma.iter().map(|&v| self.vertices.get(v).cloned().unwrap_or_default()).collect()));
        }
        let rests: Vec<Vec<usize>> = self
            .facets
            .iter()
            .filter(|f| is_subset(&sigma, f))
            .map(|f| f.iter().copied().filter(|v| sigma.binary_search(v).is_err()).collect())
            .collect();
        let used: BTreeSet<usize> = rests.iter().flatten().copied().collect();
        let renum: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let vertices = used.iter().map(|&v| self.vertices[v].clone()).collect();
        let facets = rests.into_iter().map(|f| f.into_iter().map(|v| renum[&v]).collect()).collect();
        Self::from_index_facets(vertices, facets)
    }

    /// Faces grouped by size: `graded[k]` holds the faces with `k` vertices.
    pub fn graded_faces(&self) -> Vec<Vec<Vec<usize>>> {
        let mut graded = vec![Vec::new(); (self.dim() + 2).max(0) as usize];
        for f in &self.faces {
            graded[f.len()].push(f.clone());
        }
        graded
    }

    /// Coboundary matrices of the augmented cochain complex with
    /// `δ(e_σ) = Σ_v (-1)^{pos(v, σ∪v)} w(v) e_{σ∪v}`.
    ///
    /// The plain simplicial coboundary is `w = 1`; twisted toric complexes use
    /// `w(v) = q_v - 1`.
    pub fn weighted_coboundaries(&self, weight: &dyn Fn(usize) -> Rational) -> Vec<ExactMatrix> {
        let graded = self.graded_faces();
        let pos: Vec<HashMap<&[usize], usize>> =
            graded.iter().map(|g| g.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect()).collect();
        (0..graded.len().saturating_sub(1))
            .map(|k| {
                let mut d = ExactMatrix::zeros(graded[k + 1].len(), graded[k].len());
                for (row, big) in graded[k + 1].iter().enumerate() {
                    for (slot, &v) in big.iter().enumerate() {
                        let w = weight(v);
                        if w.is_zero() {
                            continue;
                        }
                        let small: Vec<usize> = big.iter().copied().filter(|&u| u != v).collect();
                        let col = pos[k][small.as_slice()];
                        d[(row, col)] = if slot % 2 == 0 { w } else { -w };
                    }
                }
                d
            })
            .collect()
    }

    /// Augmented cochain complex, `∅` in degree `-1`.
    pub fn reduced_cochain_complex(&self, coeffs: Coefficients) -> Result<CochainComplex> {
        if self.is_void() {
            return Err(Error::VoidComplex);
        }
        let dims = self.graded_faces().iter().map(Vec::len).collect();
        CochainComplex::new(coeffs, -1, dims, self.weighted_coboundaries(&|_| Rational::one()))
    }

    pub fn reduced_cohomology(&self, coeffs: Coefficients) -> Result<CohomologyReport> {
        complex_cohomology(&self.reduced_cochain_complex(coeffs)?)
    }

    /// Checks that `H̃^i(lk σ)` vanishes for `i != dim L - |σ|` at every face,
    /// and over the integers that the surviving group is torsion-free.
    pub fn is_cohen_macaulay(&self, coeffs: Coefficients) -> Result<CmVerdict> {
        if self.is_void() {
            return Err(Error::VoidComplex);
        }
        let dim = self.dim();
        let mut witnesses = Vec::new();
        for sigma in &self.faces {
            let expected = dim - sigma.len() as i64;
            let h = self.link(sigma)?.reduced_cohomology(coeffs)?;
            for g in &h.groups {
                let bad = if g.degree == expected { !g.torsion.is_empty() } else { !g.is_zero() };
                if bad {
                    witnesses.push(CmWitness {
                        simplex: self.face_labels(sigma),
                        degree: g.degree,
                        rank: g.rank,
                        torsion: g.torsion.clone(),
                    });
                }
            }
        }
        Ok(CmVerdict { is_cm: witnesses.is_empty(), over: coeffs, dim, witnesses })
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self> {
        Self::from_facets(json.vertices.clone(), &json.facets)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: self.vertices.clone(),
            facets: self.facets.iter().map(|f| self.face_labels(f)).collect(),
        }
    }
}

fn bron_kerbosch(adj: &[Vec<bool>], r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() && x.is_empty() {
        if !r.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p.iter().chain(&x).copied().max_by_key(|&u| p.iter().filter(|&&v| adj[u][v]).count());
    let candidates: Vec<usize> = match pivot {
        Some(u) => p.iter().copied().filter(|&v| !adj[u][v]).collect(),
        None => p.clone(),
    };
    let (mut p, mut x) = (p, x);
    for v in candidates {
        r.push(v);
        let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    fn complex(vertices: &[&str], facets: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(s(vertices), &facets.iter().map(|f| s(f)).collect::<Vec<_>>()).unwrap()
    }

    fn boundary_triangle() -> SimplicialComplex {
        complex(&["1", "2", "3"], &[&["1", "2"], &["2", "3"], &["1", "3"]])
    }

    #[test]
    fn face_counts() {
        assert_eq!(complex(&["1", "2", "3"], &[&["1", "2", "3"]]).faces().len(), 8);
        assert_eq!(boundary_triangle().faces().len(), 7);
        let absorbed = complex(&["1", "2", "3"], &[&["1", "2"], &["1", "2", "3"]]);
        assert_eq!(absorbed.facets(), &[vec![0, 1, 2]]);
        assert!(SimplicialComplex::from_facets(s(&["1"]), &[s(&["9"])]).is_err());
    }

    #[test]
    fn links() {
        let l = boundary_triangle();
        assert_eq!(l.link(&[]).unwrap(), l);
        let lk1 = l.link(&[0]).unwrap();
        assert_eq!(lk1.vertices(), &s(&["2", "3"])[..]);
        assert_eq!(lk1.facets().len(), 2);
        assert_eq!(l.link(&[0, 1]).unwrap(), SimplicialComplex::irrelevant());
        assert!(matches!(complex(&["1", "2"], &[&["1"], &["2"]]).link(&[0, 1]), Err(Error::NotAFace(_))));
    }

    #[test]
    fn reduced_cohomology_examples() {
        let h = boundary_triangle().reduced_cohomology(Coefficients::Integers).unwrap();
        assert_eq!(h.nonzero_degrees(), vec![1]);
        assert_eq!(h.rank(1), 1);

        let two_points = complex(&["a", "b"], &[]);
        let h = two_points.reduced_cohomology(Coefficients::Rational).unwrap();
        assert_eq!(h.nonzero_degrees(), vec![0]);
        assert_eq!(h.rank(0), 1);

        let h = SimplicialComplex::irrelevant().reduced_cohomology(Coefficients::Integers).unwrap();
        assert_eq!((h.nonzero_degrees(), h.rank(-1)), (vec![-1], 1));

        assert!(matches!(SimplicialComplex::void().reduced_cohomology(Coefficients::Rational), Err(Error::VoidComplex)));
    }

    #[test]
    fn flag_complexes() {
        let tri = SimplicialComplex::flag_complex(s(&["a", "b", "c"]), &[("a".into(), "b".into()), ("b".into(), "c".into()), ("a".into(), "c".into())]).unwrap();
        assert_eq!(tri.facets(), &[vec![0, 1, 2]]);
        let path = SimplicialComplex::flag_complex(s(&["a", "b", "c"]), &[("a".into(), "b".into()), ("b".into(), "c".into())]).unwrap();
        assert_eq!(path.facets(), &[vec![0, 1], vec![1, 2]]);
        let points = SimplicialComplex::flag_complex(s(&["a", "b", "c"]), &[]).unwrap();
        assert_eq!(points.facets().len(), 3);
        assert_eq!(points.dim(), 0);
    }

    #[test]
    fn cohen_macaulay_examples() {
        let v = boundary_triangle().is_cohen_macaulay(Coefficients::Rational).unwrap();
        assert!(v.is_cm);
        assert_eq!(v.dim, 1);

        let edges = complex(&["a", "b", "c", "d"], &[&["a", "b"], &["c", "d"]]);
        let v = edges.is_cohen_macaulay(Coefficients::Rational).unwrap();
        assert!(!v.is_cm);
        assert!(v.witnesses.iter().any(|w| w.simplex.is_empty() && w.degree == 0 && w.rank == 1));

        let point = complex(&["p"], &[]);
        let v = point.is_cohen_macaulay(Coefficients::Integers).unwrap();
        assert!(v.is_cm && v.dim == 0);
    }

    #[test]
    fn projective_plane_torsion_breaks_integral_cm() {
        // six-vertex triangulation of RP^2
        let faces: &[&[&str]] = &[
            &["1", "2", "3"], &["1", "3", "4"], &["1", "4", "5"], &["1", "5", "6"], &["1", "2", "6"],
            &["2", "3", "5"], &["3", "4", "6"], &["2", "4", "5"], &["3", "5", "6"], &["2", "4", "6"],
        ];
        let rp2 = complex(&["1", "2", "3", "4", "5", "6"], faces);
        let hz = rp2.reduced_cohomology(Coefficients::Integers).unwrap();
        assert_eq!(hz.torsion(2), &[2]);
        assert!(rp2.is_cohen_macaulay(Coefficients::Rational).unwrap().is_cm);
        assert!(!rp2.is_cohen_macaulay(Coefficients::Integers).unwrap().is_cm);
        assert!(!rp2.is_cohen_macaulay(Coefficients::Prime { p: 2 }).unwrap().is_cm);
        assert!(rp2.is_cohen_macaulay(Coefficients::Prime { p: 3 }).unwrap().is_cm);
    }

    #[test]
    fn json_round_trip() {
        let l = boundary_triangle();
        let text = serde_json::to_string(&l.to_json()).unwrap();
        let back = SimplicialComplex::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, l);
    }

    fn random_complex(n: usize, masks: &[u32]) -> SimplicialComplex {
        let facets = masks.iter().map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
        SimplicialComplex::from_index_facets((0..n).map(|i| format!("v{i}")).collect(), facets).unwrap()
    }

    proptest! {
        #[test]
        fn reduced_euler_characteristic(masks in prop::collection::vec(1u32..64, 1..6)) {
            let l = random_complex(6, &masks);
            let h = l.reduced_cohomology(Coefficients::Integers).unwrap();
            let expect: i64 = l.faces().iter().map(|f| if f.len() % 2 == 1 { 1 } else { -1 }).sum();
            prop_assert_eq!(h.euler_characteristic(), expect);
        }

        #[test]
        fn link_of_link(masks in prop::collection::vec(1u32..64, 1..6), pick in 0usize..1000, pick2 in 0usize..1000) {
            let l = random_complex(6, &masks);
            let sigma = l.faces()[pick % l.faces().len()].clone();
            let lk = l.link(&sigma).unwrap();
            let tau_local = lk.faces()[pick2 % lk.faces().len()].clone();
            let tau_labels = lk.face_labels(&tau_local);
            let mut union = sigma.clone();
            union.extend(l.face_from_labels(&tau_labels).unwrap());
            union.sort_unstable();
            prop_assert_eq!(lk.link(&tau_local).unwrap(), l.link(&union).unwrap());
        }
    }
}
