//! Toric complexes `T_L`, the subcomplexes of a torus with one cell per face
//! of a simplicial complex `L`, and their rank-one twisted cohomology.

use std::collections::BTreeSet;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::WeightsJson;
use crate::covers::{build_nerve, CoverDescription, E2Entry, E2State, E2Support};
use crate::linalg::{complex_cohomology, format_rational, CochainComplex, CohomologyReport, FieldTag, Rational};
use crate::poset::FinitePoset;
use crate::simplicial::SimplicialComplex;
use crate::{Error, Result};

/// A character of the right-angled Artin group: one nonzero scalar per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricRankOneSystem {
    pub field: FieldTag,
    pub weights: Vec<Rational>,
}

impl ToricRankOneSystem {
    pub fn new(field: FieldTag, weights: Vec<Rational>, vertices: &[String]) -> Result<Self> {
        field.validate()?;
        if weights.len() != vertices.len() {
            return Err(Error::ShapeMismatch(format!("{} weights for {} vertices", weights.len(), vertices.len())));
        }
        let weights = weights
            .iter()
            .zip(vertices)
            .map(|(w, v)| {
                let w = field.reduce(w)?;
                if field.is_zero(&w) {
                    return Err(Error::ZeroWeight(v.clone()));
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ToricRankOneSystem { field, weights })
    }

    pub fn from_i64(field: FieldTag, weights: &[i64], vertices: &[String]) -> Result<Self> {
        Self::new(field, weights.iter().map(|&w| Rational::from_integer(w.into())).collect(), vertices)
    }

    pub fn trivial(field: FieldTag, n: usize) -> Self {
        ToricRankOneSystem { field, weights: vec![Rational::one(); n] }
    }

    pub fn from_json(json: &WeightsJson, vertices: &[String]) -> Result<Self> {
        if let Some(extra) = json.q.keys().find(|k| !vertices.contains(k)) {
            return Err(Error::UnknownLabel(extra.clone()));
        }
        let weights = vertices
            .iter()
            .map(|v| json.q.get(v).map(|s| s.0.clone()).ok_or_else(|| Error::Invalid(format!("no weight for {v:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.field, weights, vertices)
    }

    /// Weights drawn uniformly from `F_p` minus `{0, 1}`.
    pub fn sample(field: FieldTag, vertices: &[String], rng: &mut ChaCha8Rng) -> Result<Self> {
        let p = match field {
            FieldTag::Prime(p) if p > 2 => p,
            _ => return Err(Error::FieldTooSmall("sampling needs a prime field with p > 2".into())),
        };
        field.validate()?;
        let q: Vec<i64> = vertices.iter().map(|_| rng.gen_range(2..p) as i64).collect();
        Self::from_i64(field, &q, vertices)
    }

    pub fn is_trivial_on(&self, face: &[usize]) -> bool {
        face.iter().all(|&v| self.field.is_one(&self.weights[v]))
    }

    fn check_size(&self, l: &SimplicialComplex) -> Result<()> {
        if self.weights.len() != l.vertices().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for {} vertices",
                self.weights.len(),
                l.vertices().len()
            )));
        }
        Ok(())
    }
}

/// The cover of `T_L` by the tori of the maximal simplices.
///
/// The nerve consists of the collections of facets with a common vertex
/// (single facets always), keyed by their intersection. `P` is the set of
/// simplices arising as such intersections, ordered by reverse inclusion
/// and ranked by `-|σ|`, and `phi` sends a collection to its intersection.
pub fn cover_nerve(l: &SimplicialComplex) -> Result<CoverDescription> {
    if l.is_void() {
        return Err(Error::VoidComplex);
    }
    let facets = l.facets().to_vec();
    let names: Vec<String> = facets.iter().map(|f| format!("[{}]", l.face_labels(f).join(" "))).collect();
    let meet = |s: &[usize]| -> Vec<usize> {
        let mut acc = facets[s[0]].clone();
        for &i in &s[1..] {
            acc.retain(|v| facets[i].contains(v));
        }
        acc
    };
    let nerve = build_nerve(names, |s| {
        let m = meet(s);
        (s.len() == 1 || !m.is_empty()).then(|| format!("[{}]", l.face_labels(&m).join(" ")))
    })?;
    let images: Vec<Vec<usize>> = nerve.members.iter().map(|s| meet(s)).collect();
    let simplices: Vec<Vec<usize>> = images.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let labels: Vec<String> = simplices.iter().map(|s| format!("[{}]", l.face_labels(s).join(" "))).collect();
    let mut rel = Vec::new();
    for (i, a) in simplices.iter().enumerate() {
        for (j, b) in simplices.iter().enumerate() {
            // a <= b in reverse inclusion
            if i != j && b.iter().all(|v| a.contains(v)) {
                rel.push((i, j));
            }
        }
    }
    let p = FinitePoset::from_index_relations(labels, &rel)?;
    let rho = simplices.iter().map(|s| -(s.len() as i64)).collect();
    let phi = images.iter().map(|s| simplices.iter().position(|t| t == s).unwrap()).collect();
    Ok(CoverDescription { nerve, p, rho, phi })
}

/// Cellular cochains of `T_L` with the character: `C^k` has a basis of
/// simplices with `k` vertices and `δ e_σ = Σ ± (q_v - 1) e_{σ∪v}`, the sign
/// being the parity of the position of `v` in `σ ∪ v`.
pub fn twisted_cochain(l: &SimplicialComplex, sys: &ToricRankOneSystem) -> Result<CochainComplex> {
    if l.is_void() {
        return Err(Error::VoidComplex);
    }
    sys.check_size(l)?;
    let one = Rational::one();
    let diffs = l.weighted_coboundaries(&|v| sys.field.sub(&sys.weights[v], &one));
    let dims = l.graded_faces().iter().map(Vec::len).collect();
    CochainComplex::new(sys.field.into(), 0, dims, diffs)
}

pub fn toric_cohomology(l: &SimplicialComplex, sys: &ToricRankOneSystem) -> Result<CohomologyReport> {
    complex_cohomology(&twisted_cochain(l, sys)?)
}

/// E2 page of the cover spectral sequence with exact dimensions:
/// `E2^{p,2|τ|} = H̃^{p+|τ|-1}(lk τ)` for each simplex `τ` on which the
/// character is trivial.
///
/// The torus factor is taken in its top degree `|τ|` only, which is exact
/// when the restricted characters are maximal Cohen–Macaulay, as they are
/// when every weight differs from one. With trivial weights the lower torus
/// degrees are not represented.
pub fn toric_e2_page(l: &SimplicialComplex, sys: &ToricRankOneSystem) -> Result<E2Support> {
    if l.is_void() {
        return Err(Error::VoidComplex);
    }
    sys.check_size(l)?;
    let mut entries = Vec::new();
    for tau in l.faces() {
        if !sys.is_trivial_on(tau) {
            continue;
        }
        let t = tau.len() as i64;
        let h = l.link(tau)?.reduced_cohomology(sys.field.into())?;
        for g in h.groups.iter().filter(|g| g.rank > 0) {
            entries.push(E2Entry { p: g.degree - t + 1, q: 2 * t, state: E2State::Dim(g.rank) });
        }
    }
    Ok(E2Support::from_entries(entries, Some(l.dim() + 1)))
}

/// Support certificate for coefficients that are maximal Cohen–Macaulay on
/// every torus: each simplex `τ` may contribute `A_{G_τ}` at `q = 2|τ|`,
/// wherever `H̃^*(lk τ; k)` is nonzero.
///
/// Concentration on `p + q = d + 1` is claimed exactly when every link has
/// its reduced cohomology in degree `d - |τ|`, that is when `L` is
/// Cohen–Macaulay over the field.
pub fn toric_certificate(l: &SimplicialComplex, field: FieldTag) -> Result<E2Support> {
    if l.is_void() {
        return Err(Error::VoidComplex);
    }
    let mut entries = Vec::new();
    for tau in l.faces() {
        let t = tau.len() as i64;
        for g in l.link(tau)?.reduced_cohomology(field.into())?.groups.iter().filter(|g| g.rank > 0) {
            entries.push(E2Entry { p: g.degree - t + 1, q: 2 * t, state: E2State::PossiblyNonzero });
        }
    }
    Ok(E2Support::from_entries(entries, Some(l.dim() + 1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmTrial {
    pub weights: Vec<String>,
    /// Twisted Betti numbers in degrees `0..=d+1`.
    pub dims: Vec<usize>,
    pub concentrated: bool,
    /// `Σ_{p+q=d+1} dim E2^{pq}`.
    pub e2_total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmTheoremReport {
    pub field: FieldTag,
    pub seed: u64,
    pub dim: i64,
    pub is_cm: bool,
    pub trials: Vec<CmTrial>,
    /// Trials on a Cohen–Macaulay complex without concentration in degree
    /// `d+1` or without the E2-collapse equality.
    pub violations: usize,
    /// Trials on a non-Cohen–Macaulay complex with cohomology off degree `d+1`.
    pub nonconcentration_witnesses: usize,
}

impl CmTheoremReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Samples characters with every `q_v != 1` and compares the computed
/// cohomology with the vanishing statement for Cohen–Macaulay complexes.
///
/// On a non-Cohen–Macaulay complex nonconcentration is recorded, never
/// required: a rank-one character need not detect the failure.
pub fn verify_cm_theorem(l: &SimplicialComplex, trials: usize, field: FieldTag, seed: u64) -> Result<CmTheoremReport> {
    let p = match field {
        FieldTag::Prime(p) => p,
        FieldTag::Rational => return Err(Error::FieldTooSmall("sampling needs a prime field".into())),
    };
    field.validate()?;
    if (p - 1) < trials as u64 + 1 {
        return Err(Error::FieldTooSmall(format!("F_{p} has {} units, {} trials need {}", p - 1, trials, trials + 1)));
    }
    let verdict = l.is_cohen_macaulay(field.into())?;
    let d = verdict.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    let (mut violations, mut witnesses) = (0, 0);
    for _ in 0..trials {
        let sys = ToricRankOneSystem::sample(field, l.vertices(), &mut rng)?;
        let h = toric_cohomology(l, &sys)?;
        let concentrated = h.concentrated_in(d + 1);
        let e2_total = toric_e2_page(l, &sys)?.exact_total(d + 1).unwrap_or(0);
        if verdict.is_cm && (!concentrated || e2_total != h.rank(d + 1)) {
            violations += 1;
        }
        if !verdict.is_cm && !concentrated {
            witnesses += 1;
        }
        out.push(CmTrial {
            weights: sys.weights.iter().map(format_rational).collect(),
            dims: (0..=d + 1).map(|k| h.rank(k)).collect(),
            concentrated,
            e2_total,
        });
    }
    Ok(CmTheoremReport {
        field,
        seed,
        dim: d,
        is_cm: verdict.is_cm,
        trials: out,
        violations,
        nonconcentration_witnesses: witnesses,
    })
}
