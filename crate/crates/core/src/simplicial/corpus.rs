//! Every simplicial complex on at most a handful of vertices, up to isomorphism.
//!
//! Complexes are enumerated as down-closed families of vertex subsets
//! containing every singleton, then reduced to one representative per
//! isomorphism class by minimizing a canonical code over all relabellings.

use std::collections::BTreeSet;

use super::SimplicialComplex;

// A complex on `n` vertices as a sorted list of face bitmasks (empty face omitted).
type Code = Vec<u32>;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

fn relabel(mask: u32, perm: &[usize]) -> u32 {
    perm.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |acc, (_, &j)| acc | 1 << j)
}

fn canonical(faces: &[u32], perms: &[Vec<usize>]) -> Code {
    perms
        .iter()
        .map(|p| {
            let mut c: Code = faces.iter().map(|&f| relabel(f, p)).collect();
            c.sort_unstable();
            c
        })
        .min()
        .unwrap_or_default()
}

// Depth-first choice over candidate faces in increasing size; a face may be
// added only when all of its codimension-one faces are present.
fn extend(candidates: &[u32], next: usize, chosen: &mut Vec<u32>, present: &mut BTreeSet<u32>, out: &mut Vec<Vec<u32>>) {
    if next == candidates.len() {
        out.push(chosen.clone());
        return;
    }
    let f = candidates[next];
    extend(candidates, next + 1, chosen, present, out);
    let closed = (0..32).filter(|i| f >> i & 1 == 1).all(|i| present.contains(&(f & !(1 << i))));
    if closed {
        chosen.push(f);
        present.insert(f);
        extend(candidates, next + 1, chosen, present, out);
        present.remove(&f);
        chosen.pop();
    }
}

/// One representative of each isomorphism class of complexes on exactly `n`
/// vertices, each vertex being a face. For `n = 0` this is `{∅}`.
pub fn complexes_on(n: usize) -> Vec<SimplicialComplex> {
    assert!(n <= 6, "corpus enumeration is meant for tiny vertex counts");
    let perms = permutations(n);
    let singletons: Vec<u32> = (0..n).map(|i| 1 << i).collect();
    let mut candidates: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() >= 2).collect();
    candidates.sort_by_key(|m| (m.count_ones(), *m));

    let mut present: BTreeSet<u32> = singletons.iter().copied().collect();
    present.insert(0);
    let mut families = Vec::new();
    extend(&candidates, 0, &mut Vec::new(), &mut present, &mut families);

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for extra in families {
        let mut faces = singletons.clone();
        faces.extend(extra);
        let code = canonical(&faces, &perms);
        if seen.insert(code.clone()) {
            out.push(from_code(n, &code));
        }
    }
    out
}

/// All classes on `0..=max_vertices` vertices.
pub fn complexes_up_to(max_vertices: usize) -> Vec<SimplicialComplex> {
    (0..=max_vertices).flat_map(complexes_on).collect()
}

fn from_code(n: usize, code: &[u32]) -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = code
        .iter()
        .filter(|&&f| !code.iter().any(|&g| g != f && g & f == f))
        .map(|&f| (0..n).filter(|i| f >> i & 1 == 1).collect())
        .collect();
    let facets = if n == 0 { vec![Vec::new()] } else { facets };
    SimplicialComplex::from_index_facets((0..n).map(|i| i.to_string()).collect(), facets).expect("corpus complex")
}
