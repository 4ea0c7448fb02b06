//! Ultracolocalization, the coloc state sets, state-wise sensitivity through coarsenings and
//! the classes of the ultracolocalization relation.
//!
//! Everything here ranges over two-sided time and needs a bijective development. Unbounded
//! times in both directions reduce to one joint period of the two orbits.

use alloc::vec::Vec;

use crate::{Development, Error, Mask, SetSystem, StructuredSystem};

/// A certified `z, y ~> ω`: for every localization `U ∋ ω` a time `t` (recurring with
/// `period`) at which both orbits sit in `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColocVerdict {
    pub omega: usize,
    pub pair: (usize, usize),
    pub period: u64,
    pub residues: Vec<(Mask, i64)>,
}

impl ColocVerdict {
    /// Replays every residue through the development.
    pub fn replays(&self, dev: &Development) -> bool {
        let (z, y) = self.pair;
        self.residues.iter().all(|(u, t)| {
            (0..3).all(|k| {
                let s = t + k * self.period as i64 - self.period as i64;
                u.contains(dev.ev(z, s)) && u.contains(dev.ev(y, s))
            })
        })
    }
}

fn ultra(dev: &Development, sys: &SetSystem, z: usize, y: usize, omega: usize) -> Option<ColocVerdict> {
    let times = dev.recurrent_times(z, y);
    let period = (times.end - times.start) as u64;
    let mut residues = Vec::new();
    for u in sys.containing(omega) {
        let t = times.clone().find(|&t| u.contains(dev.ev(z, t)) && u.contains(dev.ev(y, t)))?;
        residues.push((u.clone(), t));
    }
    Some(ColocVerdict { omega, pair: (z, y), period, residues })
}

fn check(s: &StructuredSystem, states: &[usize]) -> Result<(), Error> {
    if !s.dev.is_bijective() {
        return Err(Error::NegativeTimeUnsupported);
    }
    let n = s.universe();
    match states.iter().find(|&&z| z >= n) {
        Some(&bad) => Err(Error::OutOfRange { index: bad, universe: n }),
        None => Ok(()),
    }
}

/// `z, y ~> ω`: both orbits meet every localization of `ω` together at arbitrarily large
/// positive and negative times.
pub fn ultracolocalizes(s: &StructuredSystem, z: usize, y: usize, omega: usize) -> Result<Option<ColocVerdict>, Error> {
    check(s, &[z, y, omega])?;
    Ok(ultra(&s.dev, &s.sys, z, y, omega))
}

/// Indices of the localizations met jointly by the orbits of `z` and `y` in recurrence.
fn joint_hits(s: &StructuredSystem, locs: &[Mask], z: usize, y: usize) -> Vec<bool> {
    let mut hit = alloc::vec![false; locs.len()];
    for t in s.dev.recurrent_times(z, y) {
        let (a, b) = (s.dev.ev(z, t), s.dev.ev(y, t));
        for (k, u) in locs.iter().enumerate() {
            hit[k] |= u.contains(a) && u.contains(b);
        }
    }
    hit
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColocSets {
    pub coloc: Mask,
    pub coloc0: Mask,
    pub coloc_plus: Mask,
    /// First certified pair per state of `coloc`, canonical order, distinct pairs preferred.
    pub verdicts: Vec<ColocVerdict>,
    /// `(ω, L(z), L(y))` per state of `coloc⁺`, for the pair recorded in `verdicts`.
    pub separators: Vec<(usize, Mask, Mask)>,
}

fn separators(sys: &SetSystem, z: usize, y: usize) -> Option<(Mask, Mask)> {
    let lz = sys.containing(z).find(|l| !l.contains(y))?;
    let ly = sys.containing(y).find(|l| !l.contains(z))?;
    Some((lz.clone(), ly.clone()))
}

/// `coloc`, `coloc⁰` (distinct pairs) and `coloc⁺` (distinct pairs separated by localizations).
pub fn coloc_sets(s: &StructuredSystem) -> Result<ColocSets, Error> {
    check(s, &[])?;
    let n = s.universe();
    let mut out = ColocSets {
        coloc: Mask::empty(n),
        coloc0: Mask::empty(n),
        coloc_plus: Mask::empty(n),
        verdicts: Vec::new(),
        separators: Vec::new(),
    };
    for omega in 0..n {
        let mut first: Option<ColocVerdict> = None;
        let mut plus: Option<(ColocVerdict, Mask, Mask)> = None;
        for z in 0..n {
            for y in 0..n {
                let Some(v) = ultra(&s.dev, &s.sys, z, y, omega) else { continue };
                out.coloc.insert(omega);
                if z != y {
                    out.coloc0.insert(omega);
                    if plus.is_none() {
                        if let Some((lz, ly)) = separators(&s.sys, z, y) {
                            plus = Some((v.clone(), lz, ly));
                        }
                    }
                }
                if first.as_ref().is_none_or(|f| f.pair.0 == f.pair.1 && z != y) {
                    first = Some(v);
                }
            }
        }
        if let Some((v, lz, ly)) = plus {
            out.coloc_plus.insert(omega);
            out.separators.push((omega, lz, ly));
            out.verdicts.push(v);
        } else if let Some(v) = first {
            out.verdicts.push(v);
        }
    }
    Ok(out)
}

/// Witness that `ω` is a sensitive state: per localization `L ∋ ω` a pair from `L` that
/// ultracolocalizes `ω` under the coarsening to `L`, and the uniform `(t, L*)` that all pairs
/// avoid while `ξ^t ω ∈ L*`. The separated variant replaces `(t, L*)` by separating
/// localizations of each pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatewiseWitness {
    pub omega: usize,
    pub pairs: Vec<(Mask, usize, usize)>,
    pub uniform: Option<(i64, Mask)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatewiseReport {
    pub states: Mask,
    pub witnesses: Vec<StatewiseWitness>,
}

/// `coloc_-`: states at which some pair sequence colocalizes.
pub fn statewise_sensitive_states(s: &StructuredSystem, separated: bool) -> Result<StatewiseReport, Error> {
    check(s, &[])?;
    let n = s.universe();
    let mut report = StatewiseReport { states: Mask::empty(n), witnesses: Vec::new() };
    for omega in 0..n {
        if let Some(w) = statewise_at(s, omega, separated) {
            report.states.insert(omega);
            report.witnesses.push(w);
        }
    }
    Ok(report)
}

fn statewise_at(s: &StructuredSystem, omega: usize, separated: bool) -> Option<StatewiseWitness> {
    let locs: Vec<&Mask> = s.sys.containing(omega).collect();
    // admissible pairs per localization
    let candidates: Vec<Vec<(usize, usize)>> = locs
        .iter()
        .map(|l| {
            let coarse = s.sys.coarsen(l);
            let mut v = Vec::new();
            for z in l.iter() {
                for y in l.iter() {
                    if separated && (z == y || separators(&s.sys, z, y).is_none()) {
                        continue;
                    }
                    if ultra(&s.dev, &coarse, z, y, omega).is_some() {
                        v.push((z, y));
                    }
                }
            }
            v
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    if separated {
        let pairs = locs.iter().zip(&candidates).map(|(l, c)| ((*l).clone(), c[0].0, c[0].1)).collect();
        return Some(StatewiseWitness { omega, pairs, uniform: None });
    }
    for t in 0..s.dev.order() as i64 {
        let w = s.dev.ev(omega, t);
        for target in s.sys.containing(w) {
            let avoid = |&(z, y): &(usize, usize)| !target.contains(s.dev.ev(z, t)) && !target.contains(s.dev.ev(y, t));
            let chosen: Option<Vec<(usize, usize)>> =
                candidates.iter().map(|c| c.iter().copied().find(|p| avoid(p))).collect();
            if let Some(chosen) = chosen {
                let pairs = locs.iter().zip(chosen).map(|(l, (z, y))| ((*l).clone(), z, y)).collect();
                return Some(StatewiseWitness { omega, pairs, uniform: Some((t, target.clone())) });
            }
        }
    }
    None
}

/// The relation `z ~ y` (some `ω` with `z, y ~> ω`) as an `n × n` table.
pub fn relation(s: &StructuredSystem) -> Result<Vec<Vec<bool>>, Error> {
    check(s, &[])?;
    let n = s.universe();
    let locs: Vec<Mask> = s.sys.nonempty().cloned().collect();
    let around: Vec<Vec<usize>> = (0..n).map(|w| (0..locs.len()).filter(|&k| locs[k].contains(w)).collect()).collect();
    let mut rel = alloc::vec![alloc::vec![false; n]; n];
    for z in 0..n {
        for y in z..n {
            let hit = joint_hits(s, &locs, z, y);
            let related = (0..n).any(|w| around[w].iter().all(|&k| hit[k]));
            rel[z][y] = related;
            rel[y][z] = related;
        }
    }
    Ok(rel)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classes {
    /// Connected blocks of `~` on the reflexivity domain.
    pub classes: Vec<Mask>,
    pub reflexivity_domain: Mask,
    pub is_equivalence: bool,
    /// `(a, b, c)` with `a ~ b`, `b ~ c` and not `a ~ c`.
    pub violation: Option<(usize, usize, usize)>,
}

/// The classes `⟨⟨Λ⟩⟩` of the ultracolocalization relation.
pub fn equivalence_classes(s: &StructuredSystem) -> Result<Classes, Error> {
    let rel = relation(s)?;
    let n = s.universe();
    let domain = Mask::from_fn(n, |z| rel[z][z]);
    let mut violation = None;
    'scan: for b in &domain {
        for a in domain.iter().filter(|&a| rel[a][b]) {
            for c in domain.iter().filter(|&c| rel[b][c]) {
                if !rel[a][c] {
                    violation = Some((a, b, c));
                    break 'scan;
                }
            }
        }
    }
    let mut classes: Vec<Mask> = Vec::new();
    let mut seen = Mask::empty(n);
    for start in &domain {
        if seen.contains(start) {
            continue;
        }
        let mut block = Mask::singleton(n, start);
        let mut stack = alloc::vec![start];
        while let Some(z) = stack.pop() {
            let fresh: Vec<usize> = domain.iter().filter(|&y| rel[z][y] && !block.contains(y)).collect();
            for y in fresh {
                block.insert(y);
                stack.push(y);
            }
        }
        seen.union_with(&block);
        classes.push(block);
    }
    classes.sort();
    Ok(Classes { classes, reflexivity_domain: domain, is_equivalence: violation.is_none(), violation })
}

/// Ultimate sensitivity: every pair of states meets every localization together at
/// arbitrarily large times.
pub fn ultimate_sensitivity(s: &StructuredSystem) -> Result<bool, Error> {
    check(s, &[])?;
    let n = s.universe();
    let locs: Vec<Mask> = s.sys.nonempty().cloned().collect();
    for z in 0..n {
        for y in z..n {
            if joint_hits(s, &locs, z, y).iter().any(|h| !h) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dissociation {
    /// Every class is a singleton.
    Total,
    /// Every class lies inside one trajectory.
    TrajectoryWise,
    /// Every class lies inside one Vorzimmer.
    VorzimmerWise,
    None,
}

/// How far the classes of `~` fall apart.
pub fn dissociation_report(s: &StructuredSystem) -> Result<Dissociation, Error> {
    let classes = equivalence_classes(s)?.classes;
    if classes.iter().all(|c| c.len() == 1) {
        return Ok(Dissociation::Total);
    }
    let trajectories: Vec<Mask> = (0..s.universe()).map(|z| s.dev.trajectory(z)).collect();
    if classes.iter().all(|c| c.first().is_some_and(|z| c.is_subset(&trajectories[z]))) {
        return Ok(Dissociation::TrajectoryWise);
    }
    let hulls = s.vorzimmer()?.hulls;
    if classes.iter().all(|c| hulls.iter().any(|h| c.is_subset(h))) {
        return Ok(Dissociation::VorzimmerWise);
    }
    Ok(Dissociation::None)
}

/// Whether each class lies in the union of the Vorzimmer hulls it meets.
pub fn classes_within_vorzimmer(s: &StructuredSystem) -> Result<bool, Error> {
    let classes = equivalence_classes(s)?.classes;
    let hulls = s.vorzimmer()?.hulls;
    Ok(classes.iter().all(|c| {
        let mut cover = Mask::empty(s.universe());
        for h in hulls.iter().filter(|h| h.intersects(c)) {
            cover.union_with(h);
        }
        c.is_subset(&cover)
    }))
}
