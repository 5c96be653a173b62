//! Finite posets with Möbius functions, order complexes and rank checks.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::simplicial::SimplicialComplex;
use crate::{Error, Result};

/// A finite partial order on labelled elements, stored as its full `<=` table.
#[derive(Debug)]
pub struct FinitePoset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    rank: Option<Vec<i64>>,
    mobius: OnceLock<Vec<i64>>,
}

impl Clone for FinitePoset {
    fn clone(&self) -> Self {
        FinitePoset {
            labels: self.labels.clone(),
            index: self.index.clone(),
            leq: self.leq.clone(),
            rank: self.rank.clone(),
            mobius: OnceLock::new(),
        }
    }
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.leq == other.leq && self.rank == other.rank
    }
}

/// Outcome of [`FinitePoset::validate_ranked`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankVerdict {
    pub valid: bool,
    /// A pair `x < y` with `rho(x) >= rho(y)` when invalid.
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<BTreeMap<String, i64>>,
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

impl FinitePoset {
    /// Builds the poset generated by `pairs` (each `(a, b)` meaning `a <= b`).
    pub fn from_relations(labels: Vec<String>, pairs: &[(String, String)]) -> Result<Self> {
        let index = index_labels(&labels)?;
        let lookup = |l: &String| index.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.clone()));
        let edges = pairs.iter().map(|(a, b)| Ok((lookup(a)?, lookup(b)?))).collect::<Result<Vec<_>>>()?;
        Self::from_edges(labels, index, &edges)
    }

    /// Same as [`from_relations`](Self::from_relations) with index pairs.
    pub fn from_index_relations(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let index = index_labels(&labels)?;
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= labels.len() || b >= labels.len()) {
            return Err(Error::UnknownLabel(format!("#{}", a.max(b))));
        }
        Self::from_edges(labels, index, pairs)
    }

    fn from_edges(labels: Vec<String>, index: HashMap<String, usize>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in edges {
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !leq[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::PosetCycle(cycle_through(&labels, edges, a, b)));
                }
            }
        }
        Ok(FinitePoset { labels, index, leq, rank: None, mobius: OnceLock::new() })
    }

    /// Attaches a rank function after checking it with [`validate_ranked`](Self::validate_ranked).
    pub fn with_rank(mut self, rank: Vec<i64>) -> Result<Self> {
        if rank.len() != self.len() {
            return Err(Error::ShapeMismatch(format!("{} ranks for {} elements", rank.len(), self.len())));
        }
        if let Some((x, y)) = self.validate_ranked(&rank).witness {
            return Err(Error::InvalidRank(x, y));
        }
        self.rank = Some(rank);
        Ok(self)
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

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn rank(&self) -> Option<&[i64]> {
        self.rank.as_deref()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Hasse diagram edges `(x, y)` with `y` covering `x`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| !(0..self.len()).any(|y| self.lt(y, x))).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| !(0..self.len()).any(|y| self.lt(x, y))).collect()
    }

    /// Elements ordered so that `x < y` implies `x` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        let below = |x: usize| (0..n).filter(|&y| self.leq(y, x)).count();
        order.sort_by_key(|&x| (below(x), x));
        order
    }

    /// Closed interval `[x, y]`, empty unless `x <= y`.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.leq(x, z) && self.leq(z, y)).collect()
    }

    pub fn open_interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.lt(x, z) && self.lt(z, y)).collect()
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.leq(z, x)).collect()
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.leq(x, z)).collect()
    }

    fn mobius_table(&self) -> &[i64] {
        self.mobius.get_or_init(|| {
            let n = self.len();
            let order = self.linear_extension();
            let mut mu = vec![0i64; n * n];
            for &x in &order {
                mu[x * n + x] = 1;
                for &y in &order {
                    if !self.lt(x, y) {
                        continue;
                    }
                    let s: i64 = (0..n).filter(|&z| self.leq(x, z) && self.lt(z, y)).map(|z| mu[x * n + z]).sum();
                    mu[x * n + y] = -s;
                }
            }
            mu
        })
    }

    /// Möbius function `mu(x, y)`; the table is computed once and shared.
    pub fn moebius(&self, x: usize, y: usize) -> Result<i64> {
        if !self.leq(x, y) {
            return Err(Error::NotComparable { x: self.labels[x].clone(), y: self.labels[y].clone() });
        }
        Ok(self.mobius_table()[x * self.len() + y])
    }

    pub fn opposite(&self) -> FinitePoset {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                leq[y * n + x] = self.leq(x, y);
            }
        }
        FinitePoset {
            labels: self.labels.clone(),
            index: self.index.clone(),
            leq,
            rank: self.rank.as_ref().map(|r| r.iter().map(|v| -v).collect()),
            mobius: OnceLock::new(),
        }
    }

    /// The subposet on `elements` (in the given order).
    pub fn restrict(&self, elements: &[usize]) -> FinitePoset {
        let k = elements.len();
        let labels: Vec<String> = elements.iter().map(|&i| self.labels[i].clone()).collect();
        let mut leq = vec![false; k * k];
        for (a, &x) in elements.iter().enumerate() {
            for (b, &y) in elements.iter().enumerate() {
                leq[a * k + b] = self.leq(x, y);
            }
        }
        FinitePoset {
            index: labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect(),
            labels,
            leq,
            rank: self.rank.as_ref().map(|r| elements.iter().map(|&i| r[i]).collect()),
            mobius: OnceLock::new(),
        }
    }

    /// Checks that `subset` is order-convex: `x <= z <= y` with `x, y` in it forces `z` in it.
    pub fn check_convex(&self, subset: &[usize]) -> Result<()> {
        let mut inside = vec![false; self.len()];
        for &i in subset {
            inside[i] = true;
        }
        for &x in subset {
            for &y in subset {
                if !self.lt(x, y) {
                    continue;
                }
                if let Some(z) = (0..self.len()).find(|&z| !inside[z] && self.leq(x, z) && self.leq(z, y)) {
                    return Err(Error::NonConvexRestriction {
                        below: self.labels[x].clone(),
                        middle: self.labels[z].clone(),
                        above: self.labels[y].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Order complex of the poset, or of an order-convex subset of it.
    ///
    /// Vertices keep the poset labels; faces are exactly the chains.
    pub fn order_complex(&self, restrict: Option<&[usize]>) -> Result<SimplicialComplex> {
        let all: Vec<usize>;
        let elements = match restrict {
            Some(s) => {
                self.check_convex(s)?;
                s
            }
            None => {
                all = (0..self.len()).collect();
                &all
            }
        };
        let labels: Vec<String> = elements.iter().map(|&i| self.labels[i].clone()).collect();
        let mut edges = Vec::new();
        for a in 0..elements.len() {
            for b in a + 1..elements.len() {
                if self.comparable(elements[a], elements[b]) {
                    edges.push((a, b));
                }
            }
        }
        SimplicialComplex::flag_complex_indexed(labels, &edges)
    }

    /// `rho` is a valid rank when it is order-preserving with antichain fibers,
    /// i.e. `x < y` forces `rho(x) < rho(y)`.
    pub fn validate_ranked(&self, rho: &[i64]) -> RankVerdict {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && rho[x] >= rho[y] {
                    return RankVerdict {
                        valid: false,
                        witness: Some((self.labels[x].clone(), self.labels[y].clone())),
                    };
                }
            }
        }
        RankVerdict { valid: true, witness: None }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let p = Self::from_relations(json.elements.clone(), &json.covers)?;
        match &json.rank {
            None => Ok(p),
            Some(map) => {
                let mut rank = Vec::with_capacity(p.len());
                for l in &p.labels {
                    rank.push(*map.get(l).ok_or_else(|| Error::Invalid(format!("no rank given for {l:?}")))?);
                }
                if let Some(extra) = map.keys().find(|k| !p.index.contains_key(*k)) {
                    return Err(Error::UnknownLabel(extra.clone()));
                }
                p.with_rank(rank)
            }
        }
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.labels.clone(),
            covers: self.covers().into_iter().map(|(x, y)| (self.labels[x].clone(), self.labels[y].clone())).collect(),
            rank: self
                .rank
                .as_ref()
                .map(|r| self.labels.iter().cloned().zip(r.iter().copied()).collect()),
        }
    }
}

// Labels along a directed cycle a -> ... -> b -> ... -> a in the input relation;
// callers guarantee a != b and mutual reachability.
fn cycle_through(labels: &[String], edges: &[(usize, usize)], a: usize, b: usize) -> Vec<String> {
    let n = labels.len();
    let mut adj = vec![Vec::new(); n];
    for &(x, y) in edges {
        adj[x].push(y);
    }
    let path = |from: usize, to: usize| -> Vec<usize> {
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &v in &adj[u] {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut out = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            out.push(cur);
        }
        out.reverse();
        out
    };
    let mut cycle = path(a, b);
    cycle.extend(path(b, a).into_iter().skip(1));
    cycle.into_iter().map(|i| labels[i].clone()).collect()
}
