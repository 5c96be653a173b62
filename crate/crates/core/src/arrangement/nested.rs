use serde::Serialize;

use super::IntersectionLattice;
use crate::simplicial::SimplicialComplex;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuildingSetKind {
    /// The connected flats (nonzero β), the top included only when connected.
    Minimal,
    /// Every flat above the bottom.
    Maximal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingSet {
    pub kind: BuildingSetKind,
    /// Flat indices, in lattice order.
    pub members: Vec<usize>,
}

impl BuildingSet {
    pub fn new(lattice: &IntersectionLattice, kind: BuildingSetKind) -> Result<Self> {
        let members = match kind {
            BuildingSetKind::Minimal => lattice.connected_flats()?,
            BuildingSetKind::Maximal => (1..lattice.len()).collect(),
        };
        Ok(BuildingSet { kind, members })
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// The nested-set complex `N(G)`: nested sets of `G` minus the top flat.
#[derive(Clone, Debug)]
pub struct NestedComplex {
    pub building: BuildingSet,
    /// Flat indices of the vertices.
    pub vertices: Vec<usize>,
    /// Every nested set as sorted flat indices, including the empty one.
    pub nested_sets: Vec<Vec<usize>>,
    pub complex: SimplicialComplex,
}

impl NestedComplex {
    /// Builds `N(G)` for an essential arrangement.
    ///
    /// `S` is nested when no antichain of two or more elements of `S` has its
    /// join in `G`. For the maximal building set this reduces to `S` being a
    /// chain. When the top flat is not in `G` (a decomposable arrangement)
    /// there is no cone point to remove and the dimension can reach `n - 1`.
    pub fn new(lattice: &IntersectionLattice, kind: BuildingSetKind) -> Result<Self> {
        lattice.arrangement().require_essential()?;
        let building = BuildingSet::new(lattice, kind)?;
        let top = lattice.top();
        let vertices: Vec<usize> = building.members.iter().copied().filter(|&x| x != top).collect();
        let mut nested_sets = vec![Vec::new()];
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
        // nestedness is inherited by subsets, so a depth-first extension suffices
        while let Some((s, from)) = stack.pop() {
            for (k, &v) in vertices.iter().enumerate().skip(from) {
                let mut t = s.clone();
                t.push(v);
                if is_nested(lattice, &building, &t) {
                    nested_sets.push(t.clone());
                    stack.push((t, k + 1));
                }
            }
        }
        nested_sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let labels: Vec<String> = vertices.iter().map(|&x| lattice.label(x).to_string()).collect();
        let facets = nested_sets
            .iter()
            .map(|s| s.iter().map(|x| vertices.iter().position(|v| v == x).unwrap()).collect())
            .collect();
        let complex = SimplicialComplex::from_index_facets(labels, facets)?;
        Ok(NestedComplex { building, vertices, nested_sets, complex })
    }

    /// Nested sets of the largest size.
    pub fn max_size(&self) -> usize {
        self.nested_sets.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Antichain-join test on every antichain of size at least two.
pub fn is_nested(lattice: &IntersectionLattice, building: &BuildingSet, s: &[usize]) -> bool {
    let p = lattice.poset();
    let k = s.len();
    for mask in 1u64..(1 << k) {
        if mask.count_ones() < 2 {
            continue;
        }
        let chosen: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
        let antichain = chosen.iter().enumerate().all(|(i, &a)| chosen[i + 1..].iter().all(|&b| !p.comparable(a, b)));
        if antichain && building.contains(lattice.join_all(&chosen)) {
            return false;
        }
    }
    true
}
