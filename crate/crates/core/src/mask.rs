//! Dense subsets of a finite universe `{0, …, n-1}`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::Error;

/// A subset of the universe `{0, …, n-1}` stored as a bitmask.
///
/// Ordering is lexicographic on the sorted member lists, so `{0,1} < {0,1,2} < {0,2} < {1}`
/// and the empty set sorts first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    n: usize,
    words: Vec<u64>,
}

impl Mask {
    pub fn empty(n: usize) -> Self {
        Mask { n, words: alloc::vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> Self {
        let mut m = Mask::empty(n);
        for w in m.words.iter_mut() {
            *w = u64::MAX;
        }
        m.trim();
        m
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        let mut m = Mask::empty(n);
        m.insert(x);
        m
    }

    /// Builds a mask from member indices, rejecting indices outside the universe.
    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self, Error> {
        let mut m = Mask::empty(n);
        for x in members {
            if x >= n {
                return Err(Error::OutOfRange { index: x, universe: n });
            }
            m.insert(x);
        }
        Ok(m)
    }

    /// Builds a mask from a membership predicate.
    pub fn from_fn(n: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut m = Mask::empty(n);
        for x in 0..n {
            if pred(x) {
                m.insert(x);
            }
        }
        m
    }

    /// Interprets the low `n` bits of `bits` as a subset; used by 2^Y enumerations.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(n <= 64, "from_bits needs a universe of at most 64 states");
        let mut m = Mask::empty(n);
        if n > 0 {
            m.words[0] = bits;
            m.trim();
        }
        m
    }

    fn trim(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < self.n, "state {x} outside universe of size {}", self.n);
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.n {
            self.words[x / 64] &= !(1 << (x % 64));
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.n && self.words[x / 64] & (1 << (x % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { mask: self, word: 0, bits: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Mask {
        let mut m = Mask { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        m.trim();
        m
    }

    pub fn union_with(&mut self, other: &Mask) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Mask) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &Mask) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Mask) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    fn zip(&self, other: &Mask, f: impl Fn(u64, u64) -> u64) -> Mask {
        debug_assert_eq!(self.n, other.n, "masks over different universes");
        Mask { n: self.n, words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect() }
    }
}

pub struct Iter<'a> {
    mask: &'a Mask,
    word: usize,
    bits: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.bits != 0 {
                let tz = self.bits.trailing_zeros() as usize;
                self.bits &= self.bits - 1;
                return Some(self.word * 64 + tz);
            }
            self.word += 1;
            if self.word >= self.mask.words.len() {
                return None;
            }
            self.bits = self.mask.words[self.word];
        }
    }
}

impl<'a> IntoIterator for &'a Mask {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl Ord for Mask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter()).then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for Mask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn lexicographic_order() {
        let a = Mask::from_indices(4, [0, 1]).unwrap();
        let b = Mask::from_indices(4, [0, 1, 2]).unwrap();
        let c = Mask::from_indices(4, [0, 2]).unwrap();
        let d = Mask::from_indices(4, [1]).unwrap();
        let e = Mask::empty(4);
        let mut v = vec![d.clone(), c.clone(), b.clone(), a.clone(), e.clone()];
        v.sort();
        assert_eq!(v, vec![e, a, b, c, d]);
    }

    #[test]
    fn wide_universe_ops() {
        let n = 200;
        let a = Mask::from_indices(n, [0, 63, 64, 199]).unwrap();
        let full = Mask::full(n);
        assert_eq!(full.len(), 200);
        assert_eq!(a.complement().len(), 196);
        assert!(a.is_subset(&full));
        assert_eq!(a.to_vec(), vec![0, 63, 64, 199]);
        assert!(Mask::from_indices(n, [200]).is_err());
    }
}
