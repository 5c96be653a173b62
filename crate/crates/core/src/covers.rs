//! Combinatorial covers and E2-page support certificates.
//!
//! A cover is given by its nerve (finite collections of sets with nonempty
//! intersection), a ranked poset `P`, and an order-preserving surjection
//! `phi` from the nerve onto `P`. The homotopy-inverse clause of the cover
//! axioms cannot be decided from set data; the validator checks it through
//! intersection keys when those are known and otherwise records it as an
//! assumption.
//!
//! The E2 engine tracks only which `(p, q)` entries can be nonzero. Exact
//! dimensions come from the module that knows the local data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::poset::{FinitePoset, PosetJson};
use crate::{Error, Result};

/// The nerve of a finite family of sets.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub sets: Vec<String>,
    /// Member indices of each nerve element, sorted.
    pub members: Vec<Vec<usize>>,
    /// Canonical key of each intersection, when known.
    pub keys: Vec<Option<String>>,
    /// Nerve elements ordered by inclusion.
    pub poset: FinitePoset,
}

pub fn nerve_label(sets: &[String], members: &[usize]) -> String {
    let names: Vec<&str> = members.iter().map(|&i| sets[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

impl Nerve {
    /// Builds the nerve from explicit elements; the order is inclusion of member sets.
    pub fn from_members(sets: Vec<String>, members: Vec<Vec<usize>>, keys: Vec<Option<String>>) -> Result<Self> {
        if keys.len() != members.len() {
            return Err(Error::ShapeMismatch(format!("{} keys for {} nerve elements", keys.len(), members.len())));
        }
        let mut members = members;
        for m in &mut members {
            m.sort_unstable();
            m.dedup();
            if m.is_empty() {
                return Err(Error::Invalid("nerve elements must be nonempty collections".into()));
            }
            if let Some(&i) = m.iter().find(|&&i| i >= sets.len()) {
                return Err(Error::UnknownLabel(format!("#{i}")));
            }
        }
        let labels: Vec<String> = members.iter().map(|m| nerve_label(&sets, m)).collect();
        let mut rel = Vec::new();
        for (a, ma) in members.iter().enumerate() {
            for (b, mb) in members.iter().enumerate() {
                if a != b && ma.iter().all(|x| mb.binary_search(x).is_ok()) {
                    rel.push((a, b));
                }
            }
        }
        let poset = FinitePoset::from_index_relations(labels, &rel)?;
        Ok(Nerve { sets, members, keys, poset })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, members: &[usize]) -> Option<usize> {
        self.members.iter().position(|m| m == members)
    }
}

/// Nerve of sets whose intersections are computed by `intersect`, which
/// returns a canonical key for a nonempty intersection and `None` otherwise.
///
/// Collections are grown one set at a time, so supersets of an empty
/// intersection are never examined.
pub fn build_nerve(sets: Vec<String>, intersect: impl Fn(&[usize]) -> Option<String>) -> Result<Nerve> {
    let n = sets.len();
    let mut members = Vec::new();
    let mut keys = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for base in frontier {
            let start = base.last().map_or(0, |&l| l + 1);
            for i in start..n {
                let mut s = base.clone();
                s.push(i);
                if let Some(key) = intersect(&s) {
                    members.push(s.clone());
                    keys.push(Some(key));
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    Nerve::from_members(sets, members, keys)
}

/// Nerve of explicit finite sets, keyed by the intersection itself.
pub fn build_nerve_from_sets<T: Ord + Clone + Debug>(labels: Vec<String>, sets: &[BTreeSet<T>]) -> Result<Nerve> {
    if labels.len() != sets.len() {
        return Err(Error::ShapeMismatch(format!("{} labels for {} sets", labels.len(), sets.len())));
    }
    build_nerve(labels, |s| {
        let mut acc = sets[s[0]].clone();
        for &i in &s[1..] {
            acc = acc.intersection(&sets[i]).cloned().collect();
        }
        (!acc.is_empty()).then(|| format!("{acc:?}"))
    })
}

#[derive(Clone, Debug)]
pub struct CoverDescription {
    pub nerve: Nerve,
    pub p: FinitePoset,
    pub rho: Vec<i64>,
    /// Nerve index to `P` index.
    pub phi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition2 {
    /// Every comparable pair in a fibre of `phi` has equal intersections.
    Satisfied,
    /// Some pairs could not be settled from keys; they are listed.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverVerdict {
    pub valid: bool,
    /// Pairs `S <= T` in the nerve with `phi(S) <= phi(T)` failing.
    pub order_failures: Vec<(String, String)>,
    pub missing_images: Vec<String>,
    pub rank_witness: Option<(String, String)>,
    /// Pairs `S <= T` with equal intersection keys but different images.
    pub equal_intersection_failures: Vec<(String, String)>,
    pub homotopy_inverse: Condition2,
    /// Pairs `S < T` in one fibre whose intersections could not be compared.
    pub pending_pairs: Vec<(String, String)>,
}

pub fn validate_cover(c: &CoverDescription) -> Result<CoverVerdict> {
    let nerve = &c.nerve;
    if c.phi.len() != nerve.len() || c.rho.len() != c.p.len() {
        return Err(Error::ShapeMismatch("phi must cover the nerve and rho must cover P".into()));
    }
    if let Some(&bad) = c.phi.iter().find(|&&x| x >= c.p.len()) {
        return Err(Error::UnknownLabel(format!("#{bad}")));
    }
    let np = &nerve.poset;
    let pair = |s: usize, t: usize| (np.label(s).to_string(), np.label(t).to_string());
    let mut order_failures = Vec::new();
    let mut equal_intersection_failures = Vec::new();
    let mut pending_pairs = Vec::new();
    for s in 0..nerve.len() {
        for t in 0..nerve.len() {
            if !np.lt(s, t) {
                continue;
            }
            let (fs, ft) = (c.phi[s], c.phi[t]);
            if !c.p.leq(fs, ft) {
                order_failures.push(pair(s, t));
            }
            let same_key = match (&nerve.keys[s], &nerve.keys[t]) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            };
            if same_key == Some(true) && fs != ft {
                equal_intersection_failures.push(pair(s, t));
            }
            if fs == ft && same_key != Some(true) {
                pending_pairs.push(pair(s, t));
            }
        }
    }
    let hit: BTreeSet<usize> = c.phi.iter().copied().collect();
    let missing_images = (0..c.p.len()).filter(|x| !hit.contains(x)).map(|x| c.p.label(x).to_string()).collect::<Vec<_>>();
    let rank_witness = c.p.validate_ranked(&c.rho).witness;
    let valid = order_failures.is_empty()
        && missing_images.is_empty()
        && rank_witness.is_none()
        && equal_intersection_failures.is_empty();
    let homotopy_inverse = if pending_pairs.is_empty() { Condition2::Satisfied } else { Condition2::Assumed };
    Ok(CoverVerdict {
        valid,
        order_failures,
        missing_images,
        rank_witness,
        equal_intersection_failures,
        homotopy_inverse,
        pending_pairs,
    })
}

/// Support information for the E2 entries contributed by one element of `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDatum {
    pub x: String,
    /// Values `q` where the coefficient factor may be nonzero.
    pub coeff_support: BTreeSet<i64>,
    /// Values `j = p - rho(x)` where the pair/link factor may be nonzero.
    pub base_support: BTreeSet<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "dim", rename_all = "kebab-case")]
pub enum E2State {
    Zero,
    PossiblyNonzero,
    Dim(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Entry {
    pub p: i64,
    pub q: i64,
    pub state: E2State,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concentration {
    pub line: i64,
    pub justification: String,
}

/// Entries of an E2 page that cannot be excluded, with a concentration verdict.
///
/// Entries not listed are zero. When `bound` is set, total degrees above it
/// are known to vanish in the abutment, so only entries with `p + q <= bound`
/// constrain the answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Support {
    pub entries: Vec<E2Entry>,
    pub bound: Option<i64>,
    pub concentration: Option<Concentration>,
    /// No entry survives at or below the bound, so the abutment is zero.
    pub vanishing: bool,
}

impl E2Support {
    /// Collects entries (dropping zeros), adding exact dimensions that land on
    /// the same position, and decides concentration.
    pub fn from_entries(entries: impl IntoIterator<Item = E2Entry>, bound: Option<i64>) -> Self {
        let mut merged: BTreeMap<(i64, i64), E2State> = BTreeMap::new();
        for e in entries {
            match e.state {
                E2State::Zero | E2State::Dim(0) => {}
                state => {
                    // summands over P add up; any vague mark makes the entry vague
                    merged
                        .entry((e.p, e.q))
                        .and_modify(|slot| {
                            *slot = match (*slot, state) {
                                (E2State::Dim(a), E2State::Dim(b)) => E2State::Dim(a + b),
                                _ => E2State::PossiblyNonzero,
                            }
                        })
                        .or_insert(state);
                }
            }
        }
        let entries: Vec<E2Entry> = merged.into_iter().map(|((p, q), state)| E2Entry { p, q, state }).collect();
        let relevant: BTreeSet<i64> =
            entries.iter().map(|e| e.p + e.q).filter(|t| bound.is_none_or(|b| *t <= b)).collect();
        let above = entries.iter().any(|e| bound.is_some_and(|b| e.p + e.q > b));
        let concentration = match (relevant.len(), bound) {
            (1, _) => {
                let line = *relevant.iter().next().unwrap();
                let justification = match (above, bound) {
                    (true, Some(b)) => format!(
                        "every entry with p+q <= {b} lies on p+q = {line}; total degrees above {b} vanish by the dimension bound"
                    ),
                    _ => format!("every possibly nonzero entry lies on p+q = {line}"),
                };
                Some(Concentration { line, justification })
            }
            _ => None,
        };
        E2Support { vanishing: relevant.is_empty(), entries, bound, concentration }
    }

    pub fn state(&self, p: i64, q: i64) -> E2State {
        self.entries.iter().find(|e| e.p == p && e.q == q).map_or(E2State::Zero, |e| e.state)
    }

    /// Total degrees `p + q` of the listed entries.
    pub fn total_degrees(&self) -> BTreeSet<i64> {
        self.entries.iter().map(|e| e.p + e.q).collect()
    }

    /// Sum of exact dimensions on the line `p + q = n`, if every entry there is exact.
    pub fn exact_total(&self, n: i64) -> Option<usize> {
        let mut sum = 0;
        for e in self.entries.iter().filter(|e| e.p + e.q == n) {
            match e.state {
                E2State::Dim(k) => sum += k,
                _ => return None,
            }
        }
        Some(sum)
    }
}

/// Builds the support of an E2 page from per-element local data.
///
/// Entry `(j + rho(x), q)` is marked for each datum with `q` in its
/// coefficient support and `j` in its base support.
pub fn e2_support(p: &FinitePoset, rho: &[i64], data: &[LocalDatum], bound: Option<i64>) -> Result<E2Support> {
    if rho.len() != p.len() {
        return Err(Error::ShapeMismatch(format!("{} ranks for {} elements", rho.len(), p.len())));
    }
    if let Some((x, y)) = p.validate_ranked(rho).witness {
        return Err(Error::InvalidRank(x, y));
    }
    let mut entries = Vec::new();
    for d in data {
        let x = p.index_of(&d.x)?;
        for &q in &d.coeff_support {
            for &j in &d.base_support {
                entries.push(E2Entry { p: j + rho[x], q, state: E2State::PossiblyNonzero });
            }
        }
    }
    Ok(E2Support::from_entries(entries, bound))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NerveElementJson {
    pub members: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
    pub phi: String,
}

/// File format for cover validation, optionally with E2 data.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    pub sets: Vec<String>,
    pub nerve: Vec<NerveElementJson>,
    #[serde(rename = "P")]
    pub p: PosetJson,
    pub rho: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Vec<LocalDatum>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
}

pub fn rho_from_map(p: &FinitePoset, map: &BTreeMap<String, i64>) -> Result<Vec<i64>> {
    if let Some(extra) = map.keys().find(|k| p.index_of(k).is_err()) {
        return Err(Error::UnknownLabel(extra.clone()));
    }
    p.labels()
        .iter()
        .map(|l| map.get(l).copied().ok_or_else(|| Error::Invalid(format!("no rank given for {l:?}"))))
        .collect()
}

impl CoverDescription {
    pub fn from_json(json: &CoverJson) -> Result<Self> {
        let p = FinitePoset::from_relations(json.p.elements.clone(), &json.p.covers)?;
        let rho = rho_from_map(&p, &json.rho)?;
        let set_index = |l: &String| {
            json.sets.iter().position(|s| s == l).ok_or_else(|| Error::UnknownLabel(l.clone()))
        };
        let mut members = Vec::new();
        let mut keys = Vec::new();
        let mut phi = Vec::new();
        for e in &json.nerve {
            members.push(e.members.iter().map(set_index).collect::<Result<Vec<_>>>()?);
            keys.push(e.key.clone());
            phi.push(p.index_of(&e.phi)?);
        }
        let nerve = Nerve::from_members(json.sets.clone(), members, keys)?;
        Ok(CoverDescription { nerve, p, rho, phi })
    }
}
