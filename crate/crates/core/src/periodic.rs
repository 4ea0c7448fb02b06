//! Eventually periodic subsets of the integer time axis.

use alloc::vec::Vec;

use crate::lcm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TimeDomain {
    /// Two-sided time; the set is purely periodic.
    Integers,
    /// Forward time; a finite transient precedes the periodic part.
    Naturals,
}

/// A set of times `T ⊆ ℤ` (or `ℕ`) that is periodic beyond a transient window.
///
/// For `t ≥ start` membership is `residues[t mod period]`; below `start` it is
/// `transient[t]`. Two-sided sets have `start = 0` and the residue rule applies to all of ℤ.
#[derive(Clone, Debug, Eq)]
pub struct PeriodicIntSet {
    domain: TimeDomain,
    transient: Vec<bool>,
    period: u64,
    residues: Vec<bool>,
}

impl PeriodicIntSet {
    pub fn two_sided(period: u64, residues: Vec<bool>) -> Self {
        assert!(period > 0 && residues.len() as u64 == period);
        PeriodicIntSet { domain: TimeDomain::Integers, transient: Vec::new(), period, residues }
    }

    pub fn forward(transient: Vec<bool>, period: u64, residues: Vec<bool>) -> Self {
        assert!(period > 0 && residues.len() as u64 == period);
        PeriodicIntSet { domain: TimeDomain::Naturals, transient, period, residues }
    }

    pub fn empty(domain: TimeDomain) -> Self {
        PeriodicIntSet { domain, transient: Vec::new(), period: 1, residues: alloc::vec![false] }
    }

    /// Two-sided set from a list of residues modulo `period`.
    pub fn from_residues(period: u64, members: &[u64]) -> Self {
        let mut r = alloc::vec![false; period as usize];
        for &m in members {
            r[(m % period) as usize] = true;
        }
        PeriodicIntSet::two_sided(period, r)
    }

    pub fn domain(&self) -> TimeDomain {
        self.domain
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// First time from which the residue rule applies.
    pub fn start(&self) -> u64 {
        self.transient.len() as u64
    }

    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        self.residues.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64)
    }

    pub fn transient_members(&self) -> impl Iterator<Item = u64> + '_ {
        self.transient.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64)
    }

    pub fn contains(&self, t: i64) -> bool {
        if t < 0 && self.domain == TimeDomain::Naturals {
            return false;
        }
        if t >= 0 && (t as u64) < self.start() {
            return self.transient[t as usize];
        }
        self.residues[t.rem_euclid(self.period as i64) as usize]
    }

    pub fn is_empty(&self) -> bool {
        !self.residues.iter().any(|&b| b) && !self.transient.iter().any(|&b| b)
    }

    /// Whether the set meets every tail `{t : |t| > t⋆}`.
    pub fn is_unbounded(&self) -> bool {
        self.residues.iter().any(|&b| b)
    }

    /// Canonical form: smallest period and shortest transient describing the same set.
    pub fn normalized(&self) -> PeriodicIntSet {
        let p = self.period as usize;
        let mut best = p;
        for d in 1..=p {
            if p.is_multiple_of(d) && (0..p).all(|i| self.residues[i] == self.residues[i % d]) {
                best = d;
                break;
            }
        }
        let residues: Vec<bool> = self.residues[..best].to_vec();
        let mut transient = self.transient.clone();
        while let Some(&last) = transient.last() {
            let t = transient.len() - 1;
            if last == residues[t % best] {
                transient.pop();
            } else {
                break;
            }
        }
        PeriodicIntSet { domain: self.domain, transient, period: best as u64, residues }
    }

    /// Set given by a membership predicate that is `period`-periodic from `start` on.
    pub fn from_fn(domain: TimeDomain, start: u64, period: u64, f: impl Fn(i64) -> bool) -> PeriodicIntSet {
        let start = if domain == TimeDomain::Integers { 0 } else { start };
        let transient = (0..start as i64).map(&f).collect();
        let base = (start.div_ceil(period) * period) as i64;
        let residues = (0..period as i64).map(|r| f(base + r)).collect();
        PeriodicIntSet { domain, transient, period, residues }.normalized()
    }

    /// `X + {t}`; forward sets drop members shifted below zero.
    pub fn shifted(&self, t: i64) -> PeriodicIntSet {
        let start = self.start() + t.max(0) as u64;
        PeriodicIntSet::from_fn(self.domain, start, self.period, |u| self.contains(u - t))
    }

    pub fn symmetric_difference(&self, other: &PeriodicIntSet) -> PeriodicIntSet {
        self.combine(other, |a, b| a != b)
    }

    /// Pointwise combination with another set of the same domain.
    pub fn combine(&self, other: &PeriodicIntSet, f: impl Fn(bool, bool) -> bool) -> PeriodicIntSet {
        assert_eq!(self.domain, other.domain, "time domains differ");
        let period = lcm(self.period, other.period);
        let start = self.start().max(other.start());
        let transient = (0..start as i64).map(|t| f(self.contains(t), other.contains(t))).collect();
        let residues = (0..period as i64)
            .map(|r| {
                // representative of residue r at or beyond the transient
                let t = r + (start.div_ceil(period) * period) as i64;
                f(self.contains(t), other.contains(t))
            })
            .collect();
        PeriodicIntSet { domain: self.domain, transient, period, residues }.normalized()
    }

    pub fn intersection(&self, other: &PeriodicIntSet) -> PeriodicIntSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &PeriodicIntSet) -> PeriodicIntSet {
        self.combine(other, |a, b| a || b)
    }

    /// Members inside the window `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> impl Iterator<Item = i64> + '_ {
        (lo..=hi).filter(move |&t| self.contains(t))
    }

    /// Longest run of consecutive members inside the periodic part, `None` if the periodic
    /// part is all of the residues (an infinite run).
    fn periodic_run(&self) -> Option<u64> {
        if self.residues.iter().all(|&b| b) {
            return None;
        }
        let p = self.period as usize;
        let (mut best, mut cur) = (0u64, 0u64);
        for i in 0..2 * p {
            if self.residues[i % p] {
                cur += 1;
                best = best.max(cur);
            } else {
                cur = 0;
            }
        }
        Some(best)
    }

    /// Whether the set contains a run of at least `run` consecutive integers; with
    /// `unbounded`, beyond every bound.
    pub fn is_keulial(&self, run: u64, unbounded: bool) -> bool {
        assert!(run >= 1, "run length must be positive");
        match self.periodic_run() {
            None => return true,
            Some(r) if r >= run => return true,
            _ => {}
        }
        if unbounded {
            return false;
        }
        let hi = (self.start() + 2 * self.period + run) as i64;
        let lo = if self.domain == TimeDomain::Integers { -hi } else { 0 };
        let mut cur = 0u64;
        for t in lo..=hi {
            if self.contains(t) {
                cur += 1;
                if cur >= run {
                    return true;
                }
            } else {
                cur = 0;
            }
        }
        false
    }

    /// Whether every maximal run of members has length at least `run`.
    pub fn is_totally_keulial(&self, run: u64) -> bool {
        assert!(run >= 1, "run length must be positive");
        if self.periodic_run().is_none() {
            // only the transient can hold short runs; scan it against the infinite tail
            return self.runs_in(0, self.start() as i64 + 1).iter().all(|&(_, len, open)| open || len >= run);
        }
        let span = (self.start() + 3 * self.period) as i64;
        let lo = if self.domain == TimeDomain::Integers { -span } else { 0 };
        self.runs_in(lo, span).iter().all(|&(_, len, open)| open || len >= run)
    }

    /// Maximal runs inside `[lo, hi]` as `(first, length, touches_window_edge)`.
    fn runs_in(&self, lo: i64, hi: i64) -> Vec<(i64, u64, bool)> {
        let mut out = Vec::new();
        let mut t = lo;
        while t <= hi {
            if self.contains(t) {
                let first = t;
                while t <= hi && self.contains(t) {
                    t += 1;
                }
                let open = (first == lo && self.domain == TimeDomain::Integers) || t > hi;
                out.push((first, (t - first) as u64, open));
            } else {
                t += 1;
            }
        }
        out
    }
}

impl PartialEq for PeriodicIntSet {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.domain == b.domain && a.transient == b.transient && a.period == b.period && a.residues == b.residues
    }
}

impl core::hash::Hash for PeriodicIntSet {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        let n = self.normalized();
        (n.domain, n.transient, n.period, n.residues).hash(state);
    }
}
