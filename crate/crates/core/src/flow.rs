//! Discrete-time developments and their interaction with a structuring.
//!
//! Time is ℤ for bijective generators and ℕ otherwise. Every orbit is rho-shaped, so
//! "at arbitrarily large times" quantifiers reduce to scans of one joint period.

use alloc::vec::Vec;

use crate::metric::invert;
use crate::periodic::PeriodicIntSet;
use crate::{lcm, Caps, Error, Mask, MetricTable, SetSystem, Truth};

/// A total self-map of `{0, …, n-1}` with precomputed orbit structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Development {
    map: Vec<usize>,
    inverse: Option<Vec<usize>>,
    /// Steps until the orbit of each state enters its cycle.
    tail: Vec<usize>,
    /// Cycle index and position for states on a cycle.
    on_cycle: Vec<Option<(usize, usize)>>,
    cycles: Vec<Vec<usize>>,
}

/// Rho-shaped orbit of a state: `preperiod` steps, then the cycle repeats forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub preperiod: usize,
    pub cycle: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowKind {
    /// Bijective generator, two-sided time.
    Development,
    /// Non-bijective generator, forward time only.
    WiderSense,
}

impl Development {
    pub fn new(map: Vec<usize>) -> Result<Self, Error> {
        let n = map.len();
        if let Some(&bad) = map.iter().find(|&&y| y >= n) {
            return Err(Error::OutOfRange { index: bad, universe: n });
        }
        let inverse = invert(&map).ok();
        let mut on_cycle = alloc::vec![None; n];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        // colour: 0 unvisited, 1 on current path, 2 done
        let mut colour = alloc::vec![0u8; n];
        for s in 0..n {
            if colour[s] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut z = s;
            while colour[z] == 0 {
                colour[z] = 1;
                path.push(z);
                z = map[z];
            }
            if colour[z] == 1 {
                let at = path.iter().position(|&p| p == z).expect("z is on the path");
                let cycle: Vec<usize> = path[at..].to_vec();
                let id = cycles.len();
                for (pos, &c) in cycle.iter().enumerate() {
                    on_cycle[c] = Some((id, pos));
                }
                cycles.push(cycle);
            }
            for p in path {
                colour[p] = 2;
            }
        }
        let mut tail = alloc::vec![usize::MAX; n];
        for z in 0..n {
            if on_cycle[z].is_some() {
                tail[z] = 0;
            }
        }
        for s in 0..n {
            if tail[s] != usize::MAX {
                continue;
            }
            let mut path = Vec::new();
            let mut z = s;
            while tail[z] == usize::MAX {
                path.push(z);
                z = map[z];
            }
            let mut t = tail[z];
            for &p in path.iter().rev() {
                t += 1;
                tail[p] = t;
            }
        }
        Ok(Development { map, inverse, tail, on_cycle, cycles })
    }

    pub fn identity(n: usize) -> Self {
        Development::new((0..n).collect()).expect("identity is valid")
    }

    pub fn universe(&self) -> usize {
        self.map.len()
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn is_bijective(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn kind(&self) -> FlowKind {
        if self.is_bijective() {
            FlowKind::Development
        } else {
            FlowKind::WiderSense
        }
    }

    pub fn step(&self, z: usize) -> usize {
        self.map[z]
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn preperiod(&self, z: usize) -> usize {
        self.tail[z]
    }

    /// Length of the cycle the orbit of `z` ends in.
    pub fn period(&self, z: usize) -> usize {
        let entry = self.entry(z);
        self.cycles[self.on_cycle[entry].expect("entry is on a cycle").0].len()
    }

    fn entry(&self, z: usize) -> usize {
        let mut e = z;
        for _ in 0..self.tail[z] {
            e = self.map[e];
        }
        e
    }

    pub fn orbit(&self, z: usize) -> Orbit {
        let entry = self.entry(z);
        let (id, pos) = self.on_cycle[entry].expect("entry is on a cycle");
        let c = &self.cycles[id];
        let cycle = (0..c.len()).map(|k| c[(pos + k) % c.len()]).collect();
        Orbit { preperiod: self.tail[z], cycle }
    }

    /// Largest preperiod; powers `f^t` with `t ≥ index` repeat with period [`order`].
    ///
    /// [`order`]: Development::order
    pub fn index(&self) -> usize {
        self.tail.iter().copied().max().unwrap_or(0)
    }

    /// Lcm of all cycle lengths (saturating).
    pub fn order(&self) -> u64 {
        self.cycles.iter().fold(1, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Number of distinct positive-time powers worth scanning: `t ∈ 1..=count`.
    pub fn distinct_powers(&self) -> u64 {
        (self.index() as u64).saturating_add(self.order()).saturating_sub(1).max(1)
    }

    /// `ξ(z, t)`; negative `t` needs a bijective generator.
    pub fn evolve(&self, z: usize, t: i64) -> Result<usize, Error> {
        if t < 0 && !self.is_bijective() {
            return Err(Error::NegativeTimeUnsupported);
        }
        let mut z = z;
        let mut t = t;
        let pre = self.tail[z] as i64;
        if t >= 0 && t <= pre {
            for _ in 0..t {
                z = self.map[z];
            }
            return Ok(z);
        }
        if t > 0 {
            for _ in 0..pre {
                z = self.map[z];
            }
            t -= pre;
        }
        let (id, pos) = self.on_cycle[z].expect("state is on a cycle");
        let c = &self.cycles[id];
        let p = c.len() as i64;
        Ok(c[(pos as i64 + t).rem_euclid(p) as usize])
    }

    pub(crate) fn ev(&self, z: usize, t: i64) -> usize {
        self.evolve(z, t).expect("time admissible for this generator")
    }

    /// Table of `ξ^t`.
    pub fn power(&self, t: i64) -> Result<Vec<usize>, Error> {
        (0..self.universe()).map(|z| self.evolve(z, t)).collect()
    }

    /// Set action used throughout: image under `f^s` for `s ≥ 0`, preimage under `f^{-s}`
    /// for `s < 0`. For bijections this is the usual two-sided action.
    pub fn act(&self, x: &Mask, s: i64) -> Mask {
        let n = self.universe();
        if s >= 0 {
            let mut out = Mask::empty(n);
            for z in x {
                out.insert(self.ev(z, s));
            }
            out
        } else {
            Mask::from_fn(n, |z| x.contains(self.ev(z, -s)))
        }
    }

    /// `(ξ^t)⁻¹(P)` for any admissible `t`.
    pub fn preimage(&self, p: &Mask, t: i64) -> Result<Mask, Error> {
        if t < 0 && !self.is_bijective() {
            return Err(Error::NegativeTimeUnsupported);
        }
        Ok(self.act(p, -t))
    }

    /// `ξ^t(X)` for any admissible `t`.
    pub fn image(&self, x: &Mask, t: i64) -> Result<Mask, Error> {
        if t < 0 && !self.is_bijective() {
            return Err(Error::NegativeTimeUnsupported);
        }
        Ok(self.act(x, t))
    }

    /// First recurrent time and joint period of a pair of orbits: for `t ≥ start` the pair
    /// `(ξ(x,t), ξ(y,t))` is periodic with the returned period.
    pub fn joint_recurrence(&self, x: usize, y: usize) -> (usize, u64) {
        let start = self.tail[x].max(self.tail[y]);
        (start, lcm(self.period(x) as u64, self.period(y) as u64))
    }

    /// One full period of the joint recurrent part of two orbits. Any clause holding at some
    /// time in this window holds at arbitrarily large `|t|`, and conversely.
    pub fn recurrent_times(&self, x: usize, y: usize) -> core::ops::Range<i64> {
        let (start, period) = self.joint_recurrence(x, y);
        let start = if self.is_bijective() { 0 } else { start as i64 };
        start..start + period as i64
    }

    /// The orbit of `z` as a set (forward orbit for non-bijective generators).
    pub fn trajectory(&self, z: usize) -> Mask {
        let o = self.orbit(z);
        let mut m = Mask::from_indices(self.universe(), o.cycle.iter().copied()).expect("in range");
        let mut w = z;
        for _ in 0..o.preperiod {
            m.insert(w);
            w = self.map[w];
        }
        m
    }

    /// `{t : ξ(z,t) ∈ A}`, exact.
    pub fn time_preimage(&self, z: usize, a: &Mask) -> PeriodicIntSet {
        let o = self.orbit(z);
        let p = o.cycle.len();
        if self.is_bijective() {
            let residues = (0..p).map(|t| a.contains(self.ev(z, t as i64))).collect();
            PeriodicIntSet::two_sided(p as u64, residues)
        } else {
            let transient = (0..o.preperiod).map(|t| a.contains(self.ev(z, t as i64))).collect();
            let residues = (0..p)
                .map(|r| {
                    let t = r + o.preperiod.div_ceil(p) * p;
                    a.contains(self.ev(z, t as i64))
                })
                .collect();
            PeriodicIntSet::forward(transient, p as u64, residues).normalized()
        }
    }

    /// Conjugate `Q ∘ g ∘ Q⁻¹`.
    pub fn conjugate(&self, q: &[usize]) -> Result<Development, Error> {
        if q.len() != self.universe() {
            return Err(Error::LengthMismatch { expected: self.universe(), found: q.len() });
        }
        let inv = invert(q)?;
        Development::new((0..q.len()).map(|y| q[self.map[inv[y]]]).collect())
    }

    /// Checks the closed-form recovery `Q⁻¹(w) = ξ(x, t)` for any `t` with `(Q⋆ξ)(Q x, t) = w`,
    /// for every state `x` and every `w` on the conjugated orbit of `Q x`.
    pub fn recover_inverse_check(&self, q: &[usize]) -> Result<bool, Error> {
        let conj = self.conjugate(q)?;
        let inv = invert(q)?;
        for x in 0..self.universe() {
            let qx = q[x];
            let span = conj.preperiod(qx) + conj.period(qx);
            for t in 0..span as i64 {
                let w = conj.ev(qx, t);
                if self.ev(x, t) != inv[w] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// One representative per trajectory (minimal index) and the paraprojector onto it.
    pub fn initial_basis(&self) -> Result<(Vec<usize>, Vec<usize>), Error> {
        if !self.is_bijective() {
            return Err(Error::NotADevelopment);
        }
        let mut para = alloc::vec![0; self.universe()];
        let mut basis = Vec::new();
        for c in &self.cycles {
            let rep = *c.iter().min().expect("cycles are nonempty");
            basis.push(rep);
            for &z in c {
                para[z] = rep;
            }
        }
        basis.sort();
        Ok((basis, para))
    }

    /// Restriction to an invariant region, reindexed onto `{0, …, |region|-1}`.
    pub fn restrict(&self, region: &Mask) -> Result<Development, Error> {
        let idx = region.to_vec();
        let mut pos = alloc::vec![usize::MAX; self.universe()];
        for (i, &z) in idx.iter().enumerate() {
            pos[z] = i;
        }
        let mut map = Vec::with_capacity(idx.len());
        for &z in &idx {
            let y = self.map[z];
            if !region.contains(y) {
                return Err(Error::NotInvariant);
            }
            map.push(pos[y]);
        }
        Development::new(map)
    }
}

/// The pair Λ = (ξ, 𝒜), optionally with a distance table.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredSystem {
    pub dev: Development,
    pub sys: SetSystem,
    pub metric: Option<MetricTable>,
}

impl StructuredSystem {
    pub fn build(
        n: usize,
        table: Vec<usize>,
        structuring: SetSystem,
        metric: Option<MetricTable>,
    ) -> Result<Self, Error> {
        if table.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: table.len() });
        }
        if structuring.universe() != n {
            return Err(Error::UniverseMismatch);
        }
        let dev = Development::new(table)?;
        if !structuring.covers() {
            return Err(Error::CoverViolation);
        }
        if let Some(m) = &metric {
            if m.universe() != n {
                return Err(Error::MetricShape("metric size differs from universe"));
            }
            if !m.is_symmetric() {
                return Err(Error::MetricShape("metric must be symmetric"));
            }
            if (0..n).any(|x| m.d(x, x) != 0.0) {
                return Err(Error::MetricShape("metric diagonal must vanish"));
            }
        }
        Ok(StructuredSystem { dev, sys: structuring, metric })
    }

    pub fn new(dev: Development, sys: SetSystem) -> Result<Self, Error> {
        let n = dev.universe();
        StructuredSystem::build(n, dev.table().to_vec(), sys, None)
    }

    pub fn with_metric(mut self, metric: MetricTable) -> Result<Self, Error> {
        let n = self.universe();
        self = StructuredSystem::build(n, self.dev.table().to_vec(), self.sys, Some(metric))?;
        Ok(self)
    }

    pub fn universe(&self) -> usize {
        self.dev.universe()
    }

    pub fn full(&self) -> Mask {
        Mask::full(self.universe())
    }

    pub(crate) fn require_bijective(&self) -> Result<(), Error> {
        if self.dev.is_bijective() {
            Ok(())
        } else {
            Err(Error::NotADevelopment)
        }
    }

    pub fn metric(&self) -> Result<&MetricTable, Error> {
        self.metric.as_ref().ok_or(Error::NoMetric)
    }

    /// Times worth scanning for set-level predicates, `1..=count`, and whether the scan is
    /// complete (every power up to periodicity) under the cap.
    pub fn time_scan(&self, caps: &Caps) -> (Vec<i64>, bool) {
        let count = self.dev.distinct_powers();
        let complete = count <= caps.t_cap;
        let upto = count.min(caps.t_cap);
        ((1..=upto as i64).collect(), complete)
    }

    /// Whether every nonempty `P ∈ 𝒜` has a nonempty `Q ∈ 𝒜` inside `(ξ^t)⁻¹(P)`.
    pub fn is_cantor_continuous(&self, t: i64) -> Result<bool, Error> {
        for p in self.sys.nonempty() {
            let pre = self.dev.preimage(p, t)?;
            if !self.sys.nonempty().any(|q| q.is_subset(&pre)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cantor continuity at every scanned positive time; negative times are redundant for
    /// bijections only through this scan, so they are checked too when available.
    pub fn is_cantor_continuous_all(&self, caps: &Caps) -> Result<Truth, Error> {
        let (times, complete) = self.time_scan(caps);
        for &t in &times {
            if !self.is_cantor_continuous(t)? {
                return Ok(Truth::False);
            }
            if self.dev.is_bijective() && !self.is_cantor_continuous(-t)? {
                return Ok(Truth::False);
            }
        }
        Ok(if complete { Truth::True } else { Truth::Unknown })
    }

    /// `[cl_𝒜, ξ^t](X) = cl(ξ^t X) Δ ξ^t(cl X)`.
    pub fn commutator_apply(&self, t: i64, x: &Mask) -> Result<Mask, Error> {
        let moved = self.dev.image(x, t)?;
        let closed_then_moved = self.dev.image(&self.sys.closure(x), t)?;
        Ok(self.sys.closure(&moved).symmetric_difference(&closed_then_moved))
    }

    /// Exact witness for a nonempty commutator of a bijection `ξ^t`.
    ///
    /// `[cl, φ]` vanishes identically iff `φ` and `φ⁻¹` map closed sets to closed sets, i.e.
    /// iff `φ^{±1}Q` is open for every `Q ∈ 𝒜 \ {∅, Y}`. A failing `(Q, q)` yields the
    /// sensitive set `X = Y \ Q` (for `q = +1`) or `X = φ⁻¹(Y \ Q)` (for `q = -1`).
    pub fn find_sensitive_localization(&self, t: i64) -> Result<Option<LocalizationWitness>, Error> {
        self.require_bijective()?;
        for q in self.sys.nonempty().filter(|q| !q.is_full()) {
            for dir in [1i64, -1] {
                let image = self.dev.act(q, dir * t);
                if self.sys.interior(&image) != image {
                    let co = q.complement();
                    let x = if dir == 1 { co } else { self.dev.act(&co, -t) };
                    let commutator = self.commutator_apply(t, &x)?;
                    debug_assert!(!commutator.is_empty());
                    return Ok(Some(LocalizationWitness {
                        t,
                        q: dir as i8,
                        localization: q.clone(),
                        image_unhaltig: self.sys.is_unhaltig(&image),
                        image,
                        sensitive_set: x,
                        commutator,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Poincaré: every localization met by an orbit is met again at arbitrarily large `|t|`.
    pub fn is_poincare(&self) -> Result<bool, Error> {
        self.require_bijective()?;
        let n = self.universe();
        Ok((0..n).all(|z| {
            let o = self.dev.orbit(z);
            let traj = self.dev.trajectory(z);
            self.sys.selection(&traj).iter().all(|l| o.cycle.iter().any(|&w| l.contains(w)))
        }))
    }

    /// Global Poincaré: additionally every nonempty localization is met by every orbit.
    pub fn is_global_poincare(&self) -> Result<bool, Error> {
        if !self.is_poincare()? {
            return Ok(false);
        }
        let n = self.universe();
        Ok((0..n).all(|z| {
            let traj = self.dev.trajectory(z);
            self.sys.nonempty().all(|l| l.intersects(&traj))
        }))
    }

    /// Hulls `cl_𝒜(ξ(x, ℤ))` per trajectory, the partition check and per-hull Zimmer flags.
    pub fn vorzimmer(&self) -> Result<Vorzimmer, Error> {
        self.require_bijective()?;
        let mut hulls: Vec<Mask> = self
            .dev
            .cycles()
            .iter()
            .map(|c| self.sys.closure(&Mask::from_indices(self.universe(), c.iter().copied()).expect("in range")))
            .collect();
        hulls.sort();
        hulls.dedup();
        let is_partition = crate::setsys::is_partition(&hulls, &self.full());
        let zimmer = hulls
            .iter()
            .enumerate()
            .map(|(i, h)| hulls.iter().enumerate().all(|(j, k)| i == j || !h.intersects(k)))
            .collect();
        Ok(Vorzimmer { hulls, is_partition, zimmer })
    }

    /// The structured system conjugated by a bijection, with the pushed-forward structuring.
    pub fn conjugate(&self, q: &[usize]) -> Result<StructuredSystem, Error> {
        let dev = self.dev.conjugate(q)?;
        let sys = self.sys.push_forward(q);
        let metric = match &self.metric {
            Some(m) => Some(m.pullback(q)?),
            None => None,
        };
        Ok(StructuredSystem { dev, sys, metric })
    }

    /// Restriction `(ξ|R, 𝒜 ∩ R)` to an invariant region, reindexed.
    pub fn restrict(&self, region: &Mask) -> Result<StructuredSystem, Error> {
        let dev = self.dev.restrict(region)?;
        let sys = self.sys.restrict(region);
        let idx = region.to_vec();
        let metric = self.metric.as_ref().map(|m| {
            let k = idx.len();
            MetricTable::new(k, (0..k * k).map(|i| m.d(idx[i / k], idx[i % k])).collect()).expect("sub-table of a metric")
        });
        Ok(StructuredSystem { dev, sys, metric })
    }
}

/// A localization whose image under `ξ^{qt}` is not open, with a replayable sensitive set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationWitness {
    pub t: i64,
    pub q: i8,
    pub localization: Mask,
    pub image: Mask,
    /// The image contains no nonempty localization at all (the strict witness form).
    pub image_unhaltig: bool,
    pub sensitive_set: Mask,
    pub commutator: Mask,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vorzimmer {
    pub hulls: Vec<Mask>,
    pub is_partition: bool,
    pub zimmer: Vec<bool>,
}

/// Cantor continuity of a restriction `g|L` against the trace structuring `𝒜 ∩ L`.
///
/// `pre(P)` is the set-level preimage of `P` under `g`. Every nonempty `P ∈ 𝒜` whose preimage
/// meets `L` needs a member `Z` with `∅ ≠ Z ∩ L ⊆ L ∩ pre(P)`.
pub fn restricted_cantor(sys: &SetSystem, l: &Mask, pre: impl Fn(&Mask) -> Mask) -> bool {
    let traces: Vec<Mask> = sys.sets().iter().map(|z| z.intersection(l)).filter(|z| !z.is_empty()).collect();
    sys.nonempty().all(|p| {
        let inside = pre(p).intersection(l);
        inside.is_empty() || traces.iter().any(|z| z.is_subset(&inside))
    })
}
