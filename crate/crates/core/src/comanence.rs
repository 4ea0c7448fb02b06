//! Continuity machinery on the time side: dilated neighbourhoods, internal and converse
//! comanence, distances between return-time sets, their moderation flags, and keuliality.

use alloc::vec::Vec;

use crate::coloc::equivalence_classes;
use crate::periodic::PeriodicIntSet;
use crate::{Error, Mask, SetSystem, StructuredSystem};

/// Orbit segment `ξ(z, [0, t])`, or `ξ(z, [t, 0])` for negative `t`.
fn segment(s: &StructuredSystem, z: usize, t: i64) -> Result<Mask, Error> {
    let mut seg = Mask::empty(s.universe());
    let (lo, hi) = if t >= 0 { (0, t) } else { (t, 0) };
    for u in lo..=hi {
        seg.insert(s.dev.evolve(z, u)?);
    }
    Ok(seg)
}

/// The `t`-dilated neighbourhoods of `z`: unions of minimal subfamilies of the structuring that
/// cover the orbit segment. Larger covering unions contain one of these, so they add nothing to
/// the quantifiers that use the family. Fails once more than `cap` covers are explored.
pub fn dilated_neighborhoods(s: &StructuredSystem, z: usize, t: i64, cap: usize) -> Result<Vec<Mask>, Error> {
    let seg = segment(s, z, t)?;
    let locs: Vec<&Mask> = s.sys.nonempty().collect();
    let mut covers: Vec<Vec<usize>> = Vec::new();
    let mut explored = 0usize;
    let mut stack: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    while let Some(chosen) = stack.pop() {
        explored += 1;
        if explored > cap {
            return Err(Error::CapExceeded { size: explored, cap });
        }
        let mut covered = Mask::empty(s.universe());
        for &k in &chosen {
            covered.union_with(locs[k]);
        }
        match seg.difference(&covered).first() {
            None => covers.push(chosen),
            Some(p) => {
                for k in (0..locs.len()).filter(|&k| locs[k].contains(p)) {
                    let mut next = chosen.clone();
                    next.push(k);
                    stack.push(next);
                }
            }
        }
    }
    let minimal = |c: &Vec<usize>| {
        c.iter().all(|&drop| {
            let mut rest = Mask::empty(s.universe());
            for &k in c.iter().filter(|&&k| k != drop) {
                rest.union_with(locs[k]);
            }
            !seg.is_subset(&rest)
        })
    };
    let mut unions: Vec<Mask> = covers
        .iter()
        .filter(|c| minimal(c))
        .map(|c| {
            let mut u = Mask::empty(s.universe());
            for &k in c {
                u.union_with(locs[k]);
            }
            u
        })
        .collect();
    unions.sort();
    unions.dedup();
    Ok(unions)
}

/// Internal comanence: for every state `z`, sweep length `t` and dilated neighbourhood `L⁺`
/// there is a localization of `z` whose whole `t`-sweep stays inside `L⁺`.
///
/// Segments and sweeps saturate after `n - 1` steps, so `|t| < n` is exhaustive.
pub fn internally_comanent(s: &StructuredSystem, cap: usize) -> Result<bool, Error> {
    let n = s.universe() as i64;
    let mut times: Vec<i64> = (1..n.max(2)).collect();
    if s.dev.is_bijective() {
        times.extend((1..n.max(2)).map(|t| -t));
    }
    for &t in &times {
        let sweeps: Vec<Mask> = s
            .sys
            .sets()
            .iter()
            .map(|l| {
                let mut sw = Mask::empty(s.universe());
                for y in l {
                    sw.union_with(&segment(s, y, t).expect("admissible sign"));
                }
                sw
            })
            .collect();
        for z in 0..s.universe() {
            for plus in dilated_neighborhoods(s, z, t, cap)? {
                let fits = s.sys.sets().iter().zip(&sweeps).any(|(l, sw)| l.contains(z) && sw.is_subset(&plus));
                if !fits {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Default half-width of the Gaussian window.
pub const GAUSS_WINDOW: i64 = 64;

fn gauss_weight(k: i64) -> f64 {
    const INV_SQRT_TAU: f64 = 0.398_942_280_401_432_7;
    libm::exp(-((k * k) as f64) / 2.0) * INV_SQRT_TAU
}

/// `g(X, Y) = Σ_{|k| ≤ w} |1_X(k) - 1_Y(k)| · e^{-k²/2}/√(2π)`.
pub fn gaussian_set_distance(x: &PeriodicIntSet, y: &PeriodicIntSet, window: i64) -> f64 {
    (-window..=window).filter(|&k| x.contains(k) != y.contains(k)).map(gauss_weight).sum()
}

/// Hausdorff distance of `X ∩ [-w, w]` and `Y ∩ [-w, w]` under `|a - b|`.
pub fn hausdorff_set_distance(x: &PeriodicIntSet, y: &PeriodicIntSet, window: i64) -> f64 {
    let a: Vec<i64> = x.window(-window, window).collect();
    let b: Vec<i64> = y.window(-window, window).collect();
    hausdorff_lists(&a, &b)
}

fn hausdorff_lists(a: &[i64], b: &[i64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let dir = |p: &[i64], q: &[i64]| p.iter().map(|u| q.iter().map(|v| u.abs_diff(*v)).min().unwrap_or(0)).max().unwrap_or(0);
    dir(a, b).max(dir(b, a)) as f64
}

/// Hausdorff distance of the full sets under `|a - b|`, exact through periodicity.
pub fn hausdorff_exact(x: &PeriodicIntSet, y: &PeriodicIntSet) -> f64 {
    if x.is_empty() && y.is_empty() {
        return 0.0;
    }
    if x.is_empty() || y.is_empty() || x.is_unbounded() != y.is_unbounded() {
        return f64::INFINITY;
    }
    // distances from points beyond both transients repeat with the joint period, and every
    // nearest partner lies within one joint period on either side
    let p = crate::lcm(x.period(), y.period()) as i64;
    let start = x.start().max(y.start()) as i64;
    let lo = if x.domain() == crate::periodic::TimeDomain::Integers { -2 * p } else { 0 };
    let hi = start + 3 * p;
    let a: Vec<i64> = x.window(lo - p, hi + p).collect();
    let b: Vec<i64> = y.window(lo - p, hi + p).collect();
    let dir = |p_set: &[i64], q_set: &[i64]| {
        p_set
            .iter()
            .filter(|&&u| u >= lo && u <= hi)
            .map(|u| q_set.iter().map(|v| u.abs_diff(*v)).min().unwrap_or(u64::MAX))
            .max()
            .unwrap_or(0)
    };
    dir(&a, &b).max(dir(&b, &a)) as f64
}

/// A distance between time sets with a clipped evaluation on `[-r, r]`.
pub trait SetDistance {
    fn full(&self, x: &PeriodicIntSet, y: &PeriodicIntSet) -> f64;
    fn clipped(&self, x: &PeriodicIntSet, y: &PeriodicIntSet, r: i64) -> f64;
}

/// The Gaussian-weighted symmetric-difference distance `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gaussian {
    pub window: i64,
}

impl Default for Gaussian {
    fn default() -> Self {
        Gaussian { window: GAUSS_WINDOW }
    }
}

impl SetDistance for Gaussian {
    fn full(&self, x: &PeriodicIntSet, y: &PeriodicIntSet) -> f64 {
        gaussian_set_distance(x, y, self.window)
    }

    fn clipped(&self, x: &PeriodicIntSet, y: &PeriodicIntSet, r: i64) -> f64 {
        gaussian_set_distance(x, y, r.min(self.window))
    }
}

/// Hausdorff distance on time sets under `|a - b|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HausdorffTime;

impl SetDistance for HausdorffTime {
    fn full(&self, x: &PeriodicIntSet, y: &PeriodicIntSet) -> f64 {
        hausdorff_exact(x, y)
    }

    fn clipped(&self, x: &PeriodicIntSet, y: &PeriodicIntSet, r: i64) -> f64 {
        hausdorff_set_distance(x, y, r)
    }
}

/// The constant zero distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Zero;

impl SetDistance for Zero {
    fn full(&self, _: &PeriodicIntSet, _: &PeriodicIntSet) -> f64 {
        0.0
    }

    fn clipped(&self, _: &PeriodicIntSet, _: &PeriodicIntSet, _: i64) -> f64 {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModerationFlags {
    pub monotone: bool,
    pub continuous: bool,
    pub non_escalated: bool,
    pub moderate: bool,
}

/// Largest clipping radius used for the non-escalation flag.
pub const R_MAX: i64 = 64;

/// Moderation flags of `dist` over sample triples `(X, Y, Z)`. Monotone:
/// `D(X∩Z, Y∩Z) ≤ D(X, Y)`; continuous: `D(cl X, cl Y) = D(X, Y)`; non-escalated: the value
/// clipped to `[-R_MAX, R_MAX]` agrees with the full value.
pub fn distance_moderation_check<D: SetDistance>(
    dist: &D,
    samples: &[(PeriodicIntSet, PeriodicIntSet, PeriodicIntSet)],
    closure: impl Fn(&PeriodicIntSet) -> PeriodicIntSet,
    tol: f64,
) -> ModerationFlags {
    let close = |a: f64, b: f64| a == b || (a - b).abs() <= tol;
    let mut flags = ModerationFlags { monotone: true, continuous: true, non_escalated: true, moderate: true };
    for (x, y, z) in samples {
        let d = dist.full(x, y);
        if dist.full(&x.intersection(z), &y.intersection(z)) > d + tol {
            flags.monotone = false;
        }
        if !close(dist.full(&closure(x), &closure(y)), d) {
            flags.continuous = false;
        }
        if !close(dist.clipped(x, y, R_MAX), d) {
            flags.non_escalated = false;
        }
    }
    flags.moderate = flags.monotone && flags.continuous && flags.non_escalated;
    flags
}

/// Finite convergence `x_j -𝒜→ y`: the sequence, continued by its last term, ends inside
/// every localization of `y`, i.e. inside the halo of `y`.
pub fn converges(sys: &SetSystem, sequence: &[usize], y: usize) -> bool {
    sequence.last().is_some_and(|&x| sys.halo(y).contains(x))
}

/// Tolerance for zero tests on numeric set distances.
pub const ZERO_TOL: f64 = 1e-12;

/// Halo-mates `(x, y)` and localizations `A` whose return-time sets `D` tells apart.
pub fn converse_defects<D: SetDistance>(s: &StructuredSystem, dist: &D) -> Result<Vec<(usize, usize, Mask)>, Error> {
    s.require_bijective()?;
    let mut out = Vec::new();
    for y in 0..s.universe() {
        for x in s.sys.halo(y).iter().filter(|&x| x != y) {
            for a in s.sys.nonempty() {
                if dist.full(&s.dev.time_preimage(x, a), &s.dev.time_preimage(y, a)) > ZERO_TOL {
                    out.push((x, y, a.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// Converse comanence: halo-mates have return-time sets at distance zero for every localization.
pub fn conversely_comanent<D: SetDistance>(s: &StructuredSystem, dist: &D) -> Result<bool, Error> {
    Ok(converse_defects(s, dist)?.is_empty())
}

/// Keuliality of a time set: a run of `run` consecutive instants, beyond every bound if
/// `unbounded`; with `total`, every maximal run is that long.
pub fn keuliality(x: &PeriodicIntSet, run: u64, unbounded: bool, total: bool) -> Result<bool, Error> {
    if run == 0 {
        return Err(Error::BadParams("run length must be positive"));
    }
    Ok(if total { x.is_totally_keulial(run) && x.is_keulial(run, unbounded) } else { x.is_keulial(run, unbounded) })
}

/// Outcome of a theorem analog on a discrete instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnalogClass {
    /// Hypotheses hold and so does the conclusion.
    Holds,
    /// The hypotheses fail at discrete scale; nothing is asserted.
    Degenerate,
    /// Hypotheses hold, conclusion fails.
    Violation,
}

/// Transitivity analog: when every nonempty return-time set is unbounded keulial (runs of
/// length 1) and the system is conversely comanent under `g`, the ultracolocalization relation
/// should be an equivalence on its reflexivity domain.
pub fn transitivity_analog(s: &StructuredSystem) -> Result<AnalogClass, Error> {
    s.require_bijective()?;
    let returns_keulial = (0..s.universe()).all(|z| {
        s.sys.nonempty().all(|a| {
            let r = s.dev.time_preimage(z, a);
            r.is_empty() || r.is_keulial(1, true)
        })
    });
    if !returns_keulial || !conversely_comanent(s, &Gaussian::default())? {
        return Ok(AnalogClass::Degenerate);
    }
    Ok(if equivalence_classes(s)?.is_equivalence { AnalogClass::Holds } else { AnalogClass::Violation })
}

/// Phase-continuity analog: halo-mates with identical return-time sets must pass converse
/// comanence under `g`; halo-mates with differing return sets make the hypothesis degenerate.
pub fn converse_analog(s: &StructuredSystem) -> Result<AnalogClass, Error> {
    s.require_bijective()?;
    let mut degenerate = false;
    for y in 0..s.universe() {
        for x in s.sys.halo(y).iter().filter(|&x| x != y) {
            for a in s.sys.nonempty() {
                let (rx, ry) = (s.dev.time_preimage(x, a), s.dev.time_preimage(y, a));
                if rx != ry {
                    degenerate = true;
                } else if Gaussian::default().full(&rx, &ry) > ZERO_TOL {
                    return Ok(AnalogClass::Violation);
                }
            }
        }
    }
    Ok(if degenerate { AnalogClass::Degenerate } else { AnalogClass::Holds })
}
