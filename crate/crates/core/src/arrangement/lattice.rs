use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::Arrangement;
use crate::linalg::{poly_div_exact, IntPolynomial, Rational};
use crate::poset::FinitePoset;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    /// Every hyperplane containing the flat, sorted.
    pub closed_set: Vec<usize>,
    /// Codimension of the flat.
    pub rank: usize,
    pub kernel_basis: Vec<Vec<Rational>>,
}

/// The lattice of flats, ordered by reverse inclusion of subspaces
/// (inclusion of closed sets) and ranked by codimension.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    arrangement: Arrangement,
    flats: Vec<Flat>,
    index: HashMap<Vec<usize>, usize>,
    poset: FinitePoset,
}

pub(crate) fn set_label(labels: &[String], set: &[usize]) -> String {
    let names: Vec<&str> = set.iter().map(|&i| labels[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

impl IntersectionLattice {
    /// Enumerates flats rank by rank: each flat of rank `r + 1` is the
    /// closure of a flat of rank `r` and one more hyperplane.
    pub fn new(a: &Arrangement) -> Result<Self> {
        let mut levels: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::from([a.closure(&[])])];
        loop {
            let mut next = BTreeSet::new();
            for f in levels.last().unwrap() {
                for h in 0..a.len() {
                    if f.contains(&h) {
                        continue;
                    }
                    let mut s = f.clone();
                    s.push(h);
                    next.insert(a.closure(&s));
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        let mut flats = Vec::new();
        for (r, level) in levels.into_iter().enumerate() {
            for set in level {
                flats.push(Flat { kernel_basis: a.kernel_basis(&set), closed_set: set, rank: r });
            }
        }
        let index: HashMap<Vec<usize>, usize> =
            flats.iter().enumerate().map(|(i, f)| (f.closed_set.clone(), i)).collect();
        let labels = flats.iter().map(|f| set_label(a.labels(), &f.closed_set)).collect();
        let mut rel = Vec::new();
        for (i, f) in flats.iter().enumerate() {
            for (j, g) in flats.iter().enumerate() {
                if g.rank == f.rank + 1 && f.closed_set.iter().all(|h| g.closed_set.binary_search(h).is_ok()) {
                    rel.push((i, j));
                }
            }
        }
        let ranks = flats.iter().map(|f| f.rank as i64).collect();
        let poset = FinitePoset::from_index_relations(labels, &rel)?.with_rank(ranks)?;
        Ok(IntersectionLattice { arrangement: a.clone(), flats, index, poset })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn flat(&self, x: usize) -> &Flat {
        &self.flats[x]
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn label(&self, x: usize) -> &str {
        self.poset.label(x)
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.flats.len() - 1
    }

    /// Index of the flat with exactly this closed set.
    pub fn flat_index(&self, set: &[usize]) -> Result<usize> {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        self.index.get(&s).copied().ok_or(Error::NotAFlat(s))
    }

    /// Index of the flat spanned by a set of hyperplanes.
    pub fn span(&self, set: &[usize]) -> usize {
        self.index[&self.arrangement.closure(set)]
    }

    pub fn flat_by_label(&self, label: &str) -> Result<usize> {
        self.poset.index_of(label)
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.flats[x].rank == 1).collect()
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        let mut s = self.flats[x].closed_set.clone();
        s.extend(&self.flats[y].closed_set);
        s.sort_unstable();
        s.dedup();
        self.span(&s)
    }

    pub fn join_all(&self, xs: &[usize]) -> usize {
        let s: BTreeSet<usize> = xs.iter().flat_map(|&x| self.flats[x].closed_set.iter().copied()).collect();
        self.span(&s.into_iter().collect::<Vec<_>>())
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        let s: Vec<usize> =
            self.flats[x].closed_set.iter().copied().filter(|h| self.flats[y].closed_set.contains(h)).collect();
        self.index[&s]
    }

    /// The arrangement `A_X` of hyperplanes containing `X`.
    pub fn localization(&self, x: usize) -> Arrangement {
        self.arrangement.subarrangement(&self.flats[x].closed_set)
    }

    /// The interval `[X, 1]`, which is the lattice of the restriction `A^X`.
    pub fn restriction_poset(&self, x: usize) -> FinitePoset {
        self.poset.restrict(&self.poset.up_set(x))
    }

    pub fn moebius_from_bottom(&self, x: usize) -> i64 {
        self.poset.moebius(self.bottom(), x).expect("bottom lies below every flat")
    }

    /// `π(A_X, t) = Σ_{Y <= X} |μ(0, Y)| t^{rk Y}`; `x = top()` gives `π(A, t)`.
    pub fn poincare_of(&self, x: usize) -> IntPolynomial {
        let mut coeffs = vec![BigInt::from(0); self.flats[x].rank + 1];
        for y in self.poset.down_set(x) {
            coeffs[self.flats[y].rank] += self.moebius_from_bottom(y).abs();
        }
        IntPolynomial::new(coeffs)
    }

    pub fn poincare(&self) -> IntPolynomial {
        self.poincare_of(self.top())
    }

    /// `β(A_X) = [π(A_X, t) / (1 + t)]_{t = -1}`, sign as computed.
    pub fn beta_of(&self, x: usize) -> Result<i64> {
        if x == self.bottom() {
            // the empty arrangement: π = 1 is not divisible by 1 + t; β is zero by convention
            return Ok(0);
        }
        let q = poly_div_exact(&self.poincare_of(x), &IntPolynomial::from_i64(&[1, 1]))?;
        q.eval(&BigInt::from(-1)).to_i64().ok_or_else(|| Error::ScaleLimit("beta does not fit in 64 bits".into()))
    }

    pub fn beta(&self) -> Result<i64> {
        self.beta_of(self.top())
    }

    /// Flats `X > 0` with `β(A_X) != 0`, in lattice order.
    pub fn connected_flats(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for x in 1..self.len() {
            if self.beta_of(x)? != 0 {
                out.push(x);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::{boolean, braid_a3, lines};
    use super::*;
    use proptest::prelude::*;

    // Whitney's formula: π(t) = Σ_{S ⊆ A} (-1)^{|S|} (-t)^{rk S}, over all subsets.
    fn whitney(a: &Arrangement) -> IntPolynomial {
        let m = a.len();
        let mut coeffs = vec![BigInt::from(0); a.n() + 1];
        for mask in 0u32..(1 << m) {
            let s: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let r = a.set_rank(&s);
            let sign = if (s.len() + r) % 2 == 0 { 1 } else { -1 };
            coeffs[r] += sign;
        }
        IntPolynomial::new(coeffs)
    }

    fn rank_counts(l: &IntersectionLattice) -> Vec<usize> {
        let mut c = vec![0; l.flat(l.top()).rank + 1];
        for f in l.flats() {
            c[f.rank] += 1;
        }
        c
    }

    #[test]
    fn boolean_lattice_shape() {
        let l = IntersectionLattice::new(&boolean(3)).unwrap();
        assert_eq!(rank_counts(&l), vec![1, 3, 3, 1]);
        assert_eq!(l.poincare(), IntPolynomial::from_i64(&[1, 3, 3, 1]));
        assert_eq!(l.beta().unwrap(), 0);
        assert_eq!(l.connected_flats().unwrap(), l.atoms());
    }

    #[test]
    fn three_lines() {
        let l = IntersectionLattice::new(&lines(3)).unwrap();
        assert_eq!(rank_counts(&l), vec![1, 3, 1]);
        assert_eq!(l.poincare(), IntPolynomial::from_i64(&[1, 3, 2]));
        assert_eq!(l.beta().unwrap(), -1);
        assert_eq!(l.connected_flats().unwrap().len(), 4);
        assert_eq!(l.localization(l.top()).len(), 3);
        let h = l.atoms()[0];
        assert_eq!(l.localization(h).len(), 1);
    }

    #[test]
    fn boolean_b2_is_reducible() {
        let l = IntersectionLattice::new(&boolean(2)).unwrap();
        assert_eq!(l.poincare(), IntPolynomial::from_i64(&[1, 2, 1]));
        assert_eq!(l.beta().unwrap(), 0);
    }

    #[test]
    fn braid_a3_lattice() {
        let a = braid_a3();
        let l = IntersectionLattice::new(&a).unwrap();
        assert_eq!(rank_counts(&l), vec![1, 6, 7, 1]);
        let triples = (0..l.len()).filter(|&x| l.flat(x).rank == 2 && l.flat(x).closed_set.len() == 3).count();
        assert_eq!(triples, 4);
        assert_eq!(l.poincare(), IntPolynomial::from_i64(&[1, 6, 11, 6]));
        assert_eq!(l.beta().unwrap(), 2);
        // atoms, triple points and the top
        let conn = l.connected_flats().unwrap();
        assert_eq!(conn.len(), 6 + 4 + 1);
        let triple = (0..l.len()).find(|&x| l.flat(x).rank == 2 && l.flat(x).closed_set.len() == 3).unwrap();
        let loc = l.localization(triple);
        assert_eq!((loc.len(), loc.rank()), (3, 2));
        assert_eq!(l.restriction_poset(triple).len(), 2);
    }

    #[test]
    fn joins_and_meets() {
        let l = IntersectionLattice::new(&braid_a3()).unwrap();
        let y1 = l.flat_index(&[0]).unwrap();
        let y2 = l.flat_index(&[1]).unwrap();
        let j = l.join(y1, y2);
        assert_eq!(l.flat(j).closed_set, vec![0, 1, 3]);
        assert_eq!(l.meet(j, y1), y1);
        assert_eq!(l.meet(y1, y2), l.bottom());
        assert!(matches!(l.flat_index(&[0, 1]), Err(Error::NotAFlat(_))));
    }

    #[test]
    fn whitney_agrees_on_examples() {
        for a in [boolean(3), lines(3), lines(5), braid_a3()] {
            let l = IntersectionLattice::new(&a).unwrap();
            assert_eq!(l.poincare(), whitney(&a));
        }
    }

    #[test]
    fn moebius_alternates_with_rank() {
        let l = IntersectionLattice::new(&braid_a3()).unwrap();
        for x in 0..l.len() {
            let mu = l.moebius_from_bottom(x);
            assert_ne!(mu, 0);
            assert_eq!(mu.signum(), if l.flat(x).rank % 2 == 0 { 1 } else { -1 });
        }
    }

    fn arbitrary_arrangement() -> impl Strategy<Value = Arrangement> {
        prop::collection::vec(prop::collection::vec(-2i64..3, 3), 1..7).prop_filter_map("valid arrangement", |rows| {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            Arrangement::from_integer_rows(3, &refs).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn lattice_invariants(a in arbitrary_arrangement()) {
            let l = IntersectionLattice::new(&a).unwrap();
            let pi = l.poincare();
            prop_assert_eq!(&pi, &whitney(&a));
            prop_assert!(pi.coeffs().iter().all(|c| *c > BigInt::from(0)));
            prop_assert_eq!(pi.eval(&BigInt::from(-1)), BigInt::from(0));
            for f in l.flats() {
                prop_assert_eq!(&a.closure(&f.closed_set), &f.closed_set);
                prop_assert_eq!(f.rank + f.kernel_basis.len(), a.n());
            }
            // closed sets are exactly the closure fixed points
            for mask in 0u32..(1 << a.len()) {
                let s: Vec<usize> = (0..a.len()).filter(|i| mask >> i & 1 == 1).collect();
                let c = a.closure(&s);
                prop_assert_eq!(&a.closure(&c), &c);
                prop_assert_eq!(c == s, l.flat_index(&s).is_ok());
            }
        }
    }
}
