use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Arrangement, IntersectionLattice, NestedComplex};
use crate::covers::{E2Entry, E2State, E2Support};
use crate::linalg::{format_rational, FieldTag, Rational, Scalar};
use crate::poset::FinitePoset;
use crate::{Error, Result};

/// A rank-one local system: one nonzero scalar per hyperplane, acting as
/// the monodromy around it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneSystem {
    pub field: FieldTag,
    /// Canonical field representatives, indexed like the hyperplanes.
    pub weights: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsJson {
    pub field: FieldTag,
    pub q: BTreeMap<String, Scalar>,
}

impl RankOneSystem {
    pub fn new(field: FieldTag, weights: Vec<Rational>, labels: &[String]) -> Result<Self> {
        field.validate()?;
        if weights.len() != labels.len() {
            return Err(Error::ShapeMismatch(format!("{} weights for {} hyperplanes", weights.len(), labels.len())));
        }
        let weights = weights
            .iter()
            .zip(labels)
            .map(|(w, l)| {
                let w = field.reduce(w)?;
                if field.is_zero(&w) {
                    return Err(Error::ZeroWeight(l.clone()));
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RankOneSystem { field, weights })
    }

    pub fn from_i64(field: FieldTag, weights: &[i64], labels: &[String]) -> Result<Self> {
        Self::new(field, weights.iter().map(|&w| Rational::from_integer(w.into())).collect(), labels)
    }

    pub fn trivial(field: FieldTag, m: usize) -> Self {
        RankOneSystem { field, weights: vec![Rational::one(); m] }
    }

    pub fn from_json(json: &WeightsJson, labels: &[String]) -> Result<Self> {
        if let Some(extra) = json.q.keys().find(|k| !labels.contains(k)) {
            return Err(Error::UnknownLabel(extra.clone()));
        }
        let weights = labels
            .iter()
            .map(|l| json.q.get(l).map(|s| s.0.clone()).ok_or_else(|| Error::Invalid(format!("no weight for {l:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.field, weights, labels)
    }

    /// Product of the weights over a set of hyperplanes.
    pub fn product(&self, set: &[usize]) -> Rational {
        set.iter().fold(Rational::one(), |acc, &h| self.field.mul(&acc, &self.weights[h]))
    }

    pub fn is_projective(&self) -> bool {
        self.field.is_one(&self.product(&(0..self.weights.len()).collect::<Vec<_>>()))
    }

    /// Uniform units for all but the last hyperplane, whose weight makes the
    /// product one. Deterministic in `seed`.
    pub fn sample_projective(field: FieldTag, labels: &[String], seed: u64) -> Result<Self> {
        let FieldTag::Prime(p) = field else {
            return Err(Error::FieldTooSmall("sampling needs a prime field".into()));
        };
        field.validate()?;
        if labels.is_empty() {
            return Ok(Self::trivial(field, 0));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights: Vec<Rational> =
            (1..labels.len()).map(|_| Rational::from_integer(rng.gen_range(1..p).into())).collect();
        let prod = weights.iter().fold(Rational::one(), |acc, w| field.mul(&acc, w));
        weights.push(field.inv(&prod).expect("units"));
        Self::new(field, weights, labels)
    }

    /// Monodromy around a flat: the product of the weights of the hyperplanes containing it.
    pub fn flat_monodromy(&self, lattice: &IntersectionLattice, x: usize) -> Rational {
        self.product(&lattice.flat(x).closed_set)
    }

    fn check_size(&self, a: &Arrangement) -> Result<()> {
        if self.weights.len() != a.len() {
            return Err(Error::ShapeMismatch(format!("{} weights for {} hyperplanes", self.weights.len(), a.len())));
        }
        Ok(())
    }
}

/// Which connected flats the vanishing predicate quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VanishingMode {
    /// Systems on the projectivized complement: weights must multiply to one
    /// and the top flat, whose monodromy is then trivial, is skipped.
    Projective,
    /// Systems on the full complement: the top flat is included and no
    /// relation is imposed on the weights.
    IncludeTop,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingVerdict {
    pub holds: bool,
    pub mode: VanishingMode,
    pub failing_flats: Vec<String>,
    /// The only degree that can carry cohomology; `None` when the verdict
    /// predicts no cohomology at all or does not hold.
    pub predicted_degree: Option<i64>,
    pub predicted_dim: Option<usize>,
}

/// Checks that the monodromy around every connected flat differs from one.
///
/// In projective mode a passing verdict predicts `H^{n-1}(U)` of dimension
/// `|β|` and nothing else. In top-inclusive mode it predicts that the
/// complement has no cohomology, since the loop around the top flat is
/// central and acts by a nontrivial scalar.
pub fn vanishing_check(lattice: &IntersectionLattice, sys: &RankOneSystem, mode: VanishingMode) -> Result<VanishingVerdict> {
    let a = lattice.arrangement();
    a.require_essential()?;
    sys.check_size(a)?;
    if mode == VanishingMode::Projective && !sys.is_projective() {
        let all: Vec<usize> = (0..a.len()).collect();
        return Err(Error::NonProjective(format_rational(&sys.product(&all))));
    }
    let top = lattice.top();
    let failing_flats: Vec<String> = lattice
        .connected_flats()?
        .into_iter()
        .filter(|&x| mode == VanishingMode::IncludeTop || x != top)
        .filter(|&x| sys.field.is_one(&sys.flat_monodromy(lattice, x)))
        .map(|x| lattice.label(x).to_string())
        .collect();
    let holds = failing_flats.is_empty();
    let (predicted_degree, predicted_dim) = match (holds, mode) {
        (false, _) => (None, None),
        (true, VanishingMode::Projective) => (Some(a.n() as i64 - 1), Some(lattice.beta()?.unsigned_abs() as usize)),
        (true, VanishingMode::IncludeTop) => (None, Some(0)),
    };
    Ok(VanishingVerdict { holds, mode, failing_flats, predicted_degree, predicted_dim })
}

/// Largest nested set whose flats all have trivial monodromy (0 for `∅`).
pub fn depth_bound(lattice: &IntersectionLattice, nested: &NestedComplex, sys: &RankOneSystem) -> Result<usize> {
    sys.check_size(lattice.arrangement())?;
    Ok(nested
        .nested_sets
        .iter()
        .filter(|s| s.iter().all(|&x| sys.field.is_one(&sys.flat_monodromy(lattice, x))))
        .map(Vec::len)
        .max()
        .unwrap_or(0))
}

/// The nested sets as a poset under reverse inclusion, ranked by `-|S|`.
pub fn nested_poset(lattice: &IntersectionLattice, nested: &NestedComplex) -> Result<(FinitePoset, Vec<i64>)> {
    let sets = &nested.nested_sets;
    let labels: Vec<String> = sets
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.iter().map(|&x| lattice.label(x)).collect();
            format!("[{}]", names.join(" "))
        })
        .collect();
    let mut rel = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        for (j, t) in sets.iter().enumerate() {
            // s <= t when s contains t
            if i != j && s.len() == t.len() + 1 && t.iter().all(|x| s.contains(x)) {
                rel.push((i, j));
            }
        }
    }
    let rho: Vec<i64> = sets.iter().map(|s| -(s.len() as i64)).collect();
    let p = FinitePoset::from_index_relations(labels, &rel)?.with_rank(rho.clone())?;
    Ok((p, rho))
}

/// E2 support of the spectral sequence of the wonderful-model cover of the
/// projectivized complement, for a rank-one system.
///
/// A nested set `S` contributes `H_c^{p+|S|}` of a Stein manifold of complex
/// dimension `n-1-|S|` tensored with the cohomology of an `|S|`-torus in
/// degree `q - |S|`. The torus factor vanishes unless every flat of `S` has
/// trivial monodromy; the compact-support factor lives in
/// `p + |S| ∈ [n-1-|S|, 2(n-1-|S|)]`. The dimension bound is `n - 1`.
pub fn e2_certificate(lattice: &IntersectionLattice, nested: &NestedComplex, sys: &RankOneSystem) -> Result<E2Support> {
    let a = lattice.arrangement();
    a.require_essential()?;
    sys.check_size(a)?;
    let d = a.n() as i64 - 1;
    let mut entries = Vec::new();
    for s in &nested.nested_sets {
        let k = s.len() as i64;
        let coeff: BTreeSet<i64> = if s.iter().all(|&x| sys.field.is_one(&sys.flat_monodromy(lattice, x))) {
            (k..=2 * k).collect()
        } else {
            BTreeSet::new()
        };
        for q in coeff {
            for j in (d - k)..=2 * (d - k) {
                entries.push(E2Entry { p: j - k, q, state: E2State::PossiblyNonzero });
            }
        }
    }
    Ok(E2Support::from_entries(entries, Some(d)))
}
