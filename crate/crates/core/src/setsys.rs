//! The structuring 𝒜 and its algebra: complements, closure, selections, separation.

use alloc::vec::Vec;

use crate::{Error, Mask};

/// A finite family of subsets of `{0, …, n-1}`, kept sorted and deduplicated.
///
/// A structuring must cover the universe; construction does not insist on it because
/// derived families (complements, traces) are legitimately non-covering. Use [`covers`]
/// to check.
///
/// [`covers`]: SetSystem::covers
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetSystem {
    n: usize,
    sets: Vec<Mask>,
}

impl SetSystem {
    pub fn new(n: usize, sets: Vec<Mask>) -> Result<Self, Error> {
        if sets.iter().any(|s| s.universe() != n) {
            return Err(Error::UniverseMismatch);
        }
        let mut sets = sets;
        sets.sort();
        sets.dedup();
        Ok(SetSystem { n, sets })
    }

    pub fn from_lists(n: usize, lists: &[&[usize]]) -> Result<Self, Error> {
        let sets = lists
            .iter()
            .map(|l| Mask::from_indices(n, l.iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        SetSystem::new(n, sets)
    }

    pub fn singletons(n: usize) -> Self {
        SetSystem { n, sets: (0..n).map(|x| Mask::singleton(n, x)).collect() }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Mask] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn full(&self) -> Mask {
        Mask::full(self.n)
    }

    pub fn union_all(&self) -> Mask {
        let mut u = Mask::empty(self.n);
        for s in &self.sets {
            u.union_with(s);
        }
        u
    }

    pub fn covers(&self) -> bool {
        self.union_all().is_full()
    }

    /// Nonempty members only; most quantifiers in the calculus range over these.
    pub fn nonempty(&self) -> impl Iterator<Item = &Mask> {
        self.sets.iter().filter(|s| !s.is_empty())
    }

    /// `{Y \ S : S ∈ 𝒜}`.
    pub fn complement_system(&self) -> SetSystem {
        let sets = self.sets.iter().map(Mask::complement).collect();
        SetSystem::new(self.n, sets).expect("same universe")
    }

    /// `cl_𝒜(Z)`: the intersection of all nonempty complement sets containing `Z`, or `Y`.
    ///
    /// A complement `Y \ S` is nonempty iff `S ≠ Y` and contains `Z` iff `S ∩ Z = ∅`, so the
    /// closure is `Y` minus every such `S`.
    pub fn closure(&self, z: &Mask) -> Mask {
        let mut removed = Mask::empty(self.n);
        for s in &self.sets {
            if !s.is_full() && !s.intersects(z) {
                removed.union_with(s);
            }
        }
        removed.complement()
    }

    pub fn is_closed(&self, z: &Mask) -> bool {
        self.closure(z) == *z
    }

    /// All values of the closure operator, by enumeration of `2^Y`.
    pub fn closed_sets(&self, cap: usize) -> Result<Vec<Mask>, Error> {
        if self.n > cap || self.n > 30 {
            return Err(Error::CapExceeded { size: self.n, cap });
        }
        let mut out: Vec<Mask> =
            (0u64..1 << self.n).map(|b| self.closure(&Mask::from_bits(self.n, b))).collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The `X`-selection `𝒜_X = {S ∈ 𝒜 : S ∩ X ≠ ∅}`.
    pub fn selection(&self, x: &Mask) -> Vec<Mask> {
        self.sets.iter().filter(|s| s.intersects(x)).cloned().collect()
    }

    /// Members containing the state `z`.
    pub fn containing(&self, z: usize) -> impl Iterator<Item = &Mask> {
        self.sets.iter().filter(move |s| s.contains(z))
    }

    /// `X ∈ un(𝒜)`: no nonempty member fits inside `X`.
    pub fn is_unhaltig(&self, x: &Mask) -> bool {
        !self.nonempty().any(|s| s.is_subset(x))
    }

    /// Union of the members contained in `X`; equals `X` exactly when `X` is open.
    pub fn interior(&self, x: &Mask) -> Mask {
        let mut u = Mask::empty(self.n);
        for s in self.sets.iter().filter(|s| s.is_subset(x)) {
            u.union_with(s);
        }
        u
    }

    /// Ordered pairs of nonempty disjoint members.
    pub fn disjoint_pairs(&self) -> Vec<(Mask, Mask)> {
        let mut out = Vec::new();
        for s in self.nonempty() {
            for t in self.nonempty() {
                if !s.intersects(t) {
                    out.push((s.clone(), t.clone()));
                }
            }
        }
        out
    }

    pub fn has_hausdorff_separation(&self) -> bool {
        (0..self.n).all(|x| {
            (0..self.n).filter(|&y| y != x).all(|y| {
                self.containing(x).any(|s| self.containing(y).any(|t| !s.intersects(t)))
            })
        })
    }

    /// `⋂𝒜_{z}`, the smallest localization information about `z`.
    pub fn halo(&self, z: usize) -> Mask {
        let mut h = Mask::full(self.n);
        for s in self.containing(z) {
            h.intersect_with(s);
        }
        h
    }

    pub fn is_deterministic(&self) -> bool {
        (0..self.n).all(|z| self.halo(z).len() == 1)
    }

    /// The coarsening `𝒵_(X)`: members meeting `X` absorb it, the others stay.
    pub fn coarsen(&self, x: &Mask) -> SetSystem {
        let sets = self
            .sets
            .iter()
            .map(|s| if s.intersects(x) { s.union(x) } else { s.clone() })
            .collect();
        SetSystem::new(self.n, sets).expect("same universe")
    }

    /// The trace `𝒜 ∩ L`, nonempty pieces only.
    pub fn trace(&self, l: &Mask) -> SetSystem {
        let sets = self.sets.iter().map(|s| s.intersection(l)).filter(|s| !s.is_empty()).collect();
        SetSystem::new(self.n, sets).expect("same universe")
    }

    /// Image of the family under a bijection table.
    pub fn push_forward(&self, q: &[usize]) -> SetSystem {
        let sets = self.sets.iter().map(|s| Mask::from_fn(self.n, |y| s.iter().any(|x| q[x] == y))).collect();
        SetSystem::new(self.n, sets).expect("same universe")
    }

    /// Restriction to an invariant region, reindexed onto `{0, …, |region|-1}`.
    pub fn restrict(&self, region: &Mask) -> SetSystem {
        let idx: Vec<usize> = region.to_vec();
        let m = idx.len();
        let sets = self
            .sets
            .iter()
            .map(|s| Mask::from_fn(m, |i| s.contains(idx[i])))
            .filter(|s| !s.is_empty())
            .collect();
        SetSystem::new(m, sets).expect("same universe")
    }

    /// Whether the family is closed under pairwise union and intersection and contains ∅ and Y.
    pub fn is_topology(&self) -> bool {
        let has = |m: &Mask| self.sets.binary_search(m).is_ok();
        has(&Mask::empty(self.n))
            && has(&Mask::full(self.n))
            && self.sets.iter().all(|a| self.sets.iter().all(|b| has(&a.union(b)) && has(&a.intersection(b))))
    }
}

/// Whether `family` is a partition of `y`: nonempty, pairwise disjoint blocks with union `y`.
pub fn is_partition(family: &[Mask], y: &Mask) -> bool {
    let mut seen = Mask::empty(y.universe());
    for s in family {
        if s.is_empty() || s.intersects(&seen) {
            return false;
        }
        seen.union_with(s);
    }
    seen == *y
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn m(n: usize, xs: &[usize]) -> Mask {
        Mask::from_indices(n, xs.iter().copied()).unwrap()
    }

    fn a_m() -> SetSystem {
        SetSystem::from_lists(4, &[&[0, 1], &[1, 2], &[2, 3]]).unwrap()
    }

    fn a_p() -> SetSystem {
        SetSystem::from_lists(4, &[&[0, 1], &[2, 3]]).unwrap()
    }

    #[test]
    fn complement_of_chain_cover() {
        let c = a_m().complement_system();
        assert_eq!(c.sets(), &[m(4, &[0, 1]), m(4, &[0, 3]), m(4, &[2, 3])]);
        let y = SetSystem::new(4, vec![Mask::full(4)]).unwrap();
        assert_eq!(y.complement_system().sets(), &[Mask::empty(4)]);
        assert!(!y.complement_system().covers());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(a_m().closure(&m(4, &[1])), m(4, &[0, 1]));
        assert_eq!(a_m().closure(&m(4, &[0, 2])), Mask::full(4));
    }

    #[test]
    fn closed_sets_of_blocks() {
        let cs = a_p().closed_sets(16).unwrap();
        assert_eq!(cs, vec![Mask::empty(4), m(4, &[0, 1]), m(4, &[0, 1, 2, 3]), m(4, &[2, 3])]);
        let y = SetSystem::new(3, vec![Mask::full(3)]).unwrap();
        assert_eq!(y.closed_sets(16).unwrap(), vec![Mask::full(3)]);
        let big = SetSystem::singletons(20);
        assert_eq!(big.closed_sets(16), Err(Error::CapExceeded { size: 20, cap: 16 }));
    }

    #[test]
    fn selection_and_unhaltig() {
        assert_eq!(a_m().selection(&m(4, &[1])), vec![m(4, &[0, 1]), m(4, &[1, 2])]);
        assert!(a_p().selection(&Mask::empty(4)).is_empty());
        assert!(a_p().is_unhaltig(&m(4, &[0, 2])));
        assert!(!a_p().is_unhaltig(&m(4, &[0, 1, 2])));
        assert!(a_m().is_unhaltig(&Mask::empty(4)));
    }

    #[test]
    fn separation_and_halo() {
        assert!(SetSystem::singletons(3).has_hausdorff_separation());
        assert!(!a_p().has_hausdorff_separation());
        let s = SetSystem::from_lists(3, &[&[0], &[1], &[0, 1]]).unwrap();
        assert_eq!(s.halo(0), m(3, &[0]));
        assert_eq!(a_p().halo(0), m(4, &[0, 1]));
        assert!(!a_p().is_deterministic());
        assert!(SetSystem::singletons(5).is_deterministic());
    }

    #[test]
    fn coarsening_and_partitions() {
        assert_eq!(a_p().coarsen(&m(4, &[1, 2])).sets(), &[m(4, &[0, 1, 2]), m(4, &[1, 2, 3])]);
        assert_eq!(a_m().coarsen(&Mask::empty(4)), a_m());
        let y = Mask::full(4);
        assert!(is_partition(a_p().sets(), &y));
        assert!(!is_partition(a_m().sets(), &y));
        assert!(!is_partition(&[Mask::empty(4), y.clone()], &y));
    }
}
