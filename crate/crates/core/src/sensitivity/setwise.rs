use alloc::vec::Vec;

use crate::flow::LocalizationWitness;
use crate::{Caps, Error, Mask, StructuredSystem, Truth};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetwiseWitness {
    pub t: i64,
    pub sensitive_set: Mask,
    pub commutator: Mask,
    /// Present for bijective generators, where the witness comes from an open defect.
    pub localization: Option<LocalizationWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetwiseReport {
    pub grade0: Truth,
    pub unbounded: Truth,
    pub witnesses: Vec<SetwiseWitness>,
}

/// Grade-0 set-wise sensitivity and its unbounded variant.
pub fn setwise_sensitivity(s: &StructuredSystem, caps: &Caps) -> Result<SetwiseReport, Error> {
    let (times, complete) = s.time_scan(caps);
    let mut witnesses = Vec::new();
    let mut exhausted = complete;
    for &t in &times {
        if s.dev.is_bijective() {
            if let Some(w) = s.find_sensitive_localization(t)? {
                witnesses.push(SetwiseWitness {
                    t,
                    sensitive_set: w.sensitive_set.clone(),
                    commutator: w.commutator.clone(),
                    localization: Some(w),
                });
            }
        } else {
            match forward_witness(s, t, caps)? {
                Some((x, c)) => witnesses.push(SetwiseWitness { t, sensitive_set: x, commutator: c, localization: None }),
                None if s.universe() > caps.brute_force => exhausted = false,
                None => {}
            }
        }
    }
    let found = !witnesses.is_empty();
    let grade0 = if found { Truth::True } else if exhausted { Truth::False } else { Truth::Unknown };
    let unbounded = if s.dev.is_bijective() {
        grade0
    } else {
        // powers from the index on repeat, so a witness there recurs forever
        let index = s.dev.index() as i64;
        if witnesses.iter().any(|w| w.t >= index) {
            Truth::True
        } else if exhausted {
            Truth::False
        } else {
            Truth::Unknown
        }
    };
    Ok(SetwiseReport { grade0, unbounded, witnesses })
}

/// A set with nonempty commutator at time `t` for a non-bijective generator: exhaustive on
/// small universes, otherwise a search over sets built from the structuring.
fn forward_witness(s: &StructuredSystem, t: i64, caps: &Caps) -> Result<Option<(Mask, Mask)>, Error> {
    let n = s.universe();
    let probe = |x: Mask| -> Result<Option<(Mask, Mask)>, Error> {
        let c = s.commutator_apply(t, &x)?;
        Ok((!c.is_empty()).then_some((x, c)))
    };
    if n <= caps.brute_force && n < 64 {
        for bits in 0u64..1 << n {
            if let Some(w) = probe(Mask::from_bits(n, bits))? {
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }
    for q in s.sys.nonempty() {
        let co = q.complement();
        for x in [co.clone(), q.clone(), s.sys.closure(q), s.dev.act(&co, -t)] {
            if let Some(w) = probe(x)? {
                return Ok(Some(w));
            }
        }
    }
    for z in 0..n {
        let single = Mask::singleton(n, z);
        for x in [s.sys.closure(&single), single] {
            if let Some(w) = probe(x)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Sensitivity order. Variants are ordered, so the supremum over localizations is `max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SOrd {
    /// No set-wise sensitivity at all.
    Insensitive,
    Grade(u32),
    /// The depth cap was reached.
    AtLeast(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SOrdReport {
    pub order: SOrd,
    /// False when the time scan or the grade-0 check hit a cap.
    pub complete: bool,
    /// `(t, q, Q)` attaining the order, when it comes from a localization image.
    pub witness: Option<(i64, i8, Mask)>,
}

/// Chain data for one power `φ = ξ^t`, both directions.
struct Layers {
    t: i64,
    locs: Vec<Mask>,
    /// `cantor[k][i]`: the restriction of `φ^q` to `locs[i]` is Cantor continuous, `q = [1, -1][k]`.
    cantor: [Vec<bool>; 2],
    /// `reach[k][d][i]`: a chain of `d` steps starts at `locs[i]` for direction `[1, -1][k]`.
    reach: [Vec<Vec<bool>>; 2],
}

impl Layers {
    fn new(s: &StructuredSystem, t: i64, depth_cap: usize) -> Layers {
        let locs: Vec<Mask> = s.sys.nonempty().cloned().collect();
        let m = locs.len();
        let cantor = [1i64, -1].map(|q| {
            let pre: Vec<Mask> = locs.iter().map(|p| s.dev.act(p, -q * t)).collect();
            // members meeting each localization, the only candidates for the trace clause
            (0..m)
                .map(|i| {
                    let l = &locs[i];
                    let near: Vec<&Mask> = locs.iter().filter(|z| z.intersects(l)).collect();
                    pre.iter().all(|pp| {
                        let inside = pp.intersection(l);
                        inside.is_empty() || {
                            let outside = l.difference(pp);
                            near.iter().any(|z| !z.intersects(&outside))
                        }
                    })
                })
                .collect::<Vec<bool>>()
        });
        let moved = [1i64, -1].map(|q| locs.iter().map(|l| s.dev.act(l, q * t)).collect::<Vec<Mask>>());
        let reach = [0usize, 1].map(|k| {
            let (same, other) = (k, 1 - k);
            // edge i -> j: C+ of φ^q on L_j iff L_j ⊄ φ^{-q} L_i, and L_j meets φ^{q_j} L_i
            let edges: Vec<Vec<usize>> = (0..m)
                .map(|i| {
                    (0..m)
                        .filter(|&j| {
                            let c = cantor[k][j];
                            c != locs[j].is_subset(&moved[other][i])
                                && locs[j].intersects(if c { &moved[same][i] } else { &moved[other][i] })
                        })
                        .collect()
                })
                .collect();
            let mut layers = alloc::vec![alloc::vec![true; m]];
            for d in 1..depth_cap {
                let prev = &layers[d - 1];
                let next: Vec<bool> = (0..m).map(|i| edges[i].iter().any(|&j| prev[j])).collect();
                layers.push(next);
            }
            layers
        });
        Layers { t, locs, cantor, reach }
    }

    /// Order for localization `q_loc` in direction index `k`, or `None` without an un-image.
    fn order(&self, s: &StructuredSystem, q_loc: &Mask, k: usize, depth_cap: usize) -> Option<SOrd> {
        let q = [1i64, -1][k];
        let image = s.dev.act(q_loc, q * self.t);
        if !s.sys.is_unhaltig(&image) {
            return None;
        }
        // base localizations carry a Cantor-continuous φ^{-q}
        let base: Vec<usize> =
            (0..self.locs.len()).filter(|&i| self.locs[i].intersects(&image) && self.cantor[1 - k][i]).collect();
        if base.is_empty() {
            return Some(SOrd::Grade(0));
        }
        let layers = &self.reach[k];
        let deepest = (0..layers.len()).rev().find(|&d| base.iter().any(|&i| layers[d][i])).expect("layer 0 is full");
        let n = deepest as u32 + 1;
        Some(if deepest + 1 >= depth_cap { SOrd::AtLeast(depth_cap as u32) } else { SOrd::Grade(n) })
    }
}

fn search(s: &StructuredSystem, only: Option<&Mask>, caps: &Caps) -> Result<SOrdReport, Error> {
    let depth = caps.depth_cap.max(1);
    let (times, complete) = s.time_scan(caps);
    let mut best: Option<(SOrd, i64, i8, Mask)> = None;
    for &t in &times {
        let has_un_image = s
            .sys
            .nonempty()
            .filter(|q| only.is_none_or(|o| o == *q))
            .any(|q| [t, -t].iter().any(|&u| s.sys.is_unhaltig(&s.dev.act(q, u))));
        if !has_un_image {
            continue;
        }
        let layers = Layers::new(s, t, depth);
        for q_loc in s.sys.nonempty().filter(|q| only.is_none_or(|o| o == *q)) {
            for k in 0..2 {
                if let Some(o) = layers.order(s, q_loc, k, depth) {
                    if best.as_ref().is_none_or(|b| o > b.0) {
                        best = Some((o, t, [1, -1][k], q_loc.clone()));
                    }
                }
            }
        }
    }
    if let Some((order, t, q, loc)) = best {
        return Ok(SOrdReport { order, complete, witness: Some((t, q, loc)) });
    }
    let grade0 = setwise_sensitivity(s, caps)?.grade0;
    let order = if grade0.is_true() { SOrd::Grade(0) } else { SOrd::Insensitive };
    Ok(SOrdReport { order, complete: complete && grade0 != Truth::Unknown, witness: None })
}

/// Sensitivity order for one localization `Q`, the supremum over scanned times and both
/// directions. Without any un-image of `Q` the system-level grade-0 verdict is reported.
pub fn sensitivity_order(s: &StructuredSystem, q_loc: &Mask, caps: &Caps) -> Result<SOrdReport, Error> {
    if q_loc.universe() != s.universe() {
        return Err(Error::UniverseMismatch);
    }
    search(s, Some(q_loc), caps)
}

/// System sensitivity order: the supremum over localizations.
pub fn s_ord(s: &StructuredSystem, caps: &Caps) -> Result<SOrdReport, Error> {
    search(s, None, caps)
}

/// Sensitivity order of the restriction to an invariant region.
pub fn chaotic_order(s: &StructuredSystem, region: &Mask, caps: &Caps) -> Result<SOrdReport, Error> {
    s_ord(&s.restrict(region)?, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Development, SetSystem};
    use alloc::vec;

    fn rot_blocks(k: usize) -> StructuredSystem {
        let dev = Development::new((0..4).map(|i| (i + k) % 4).collect()).unwrap();
        StructuredSystem::new(dev, SetSystem::from_lists(4, &[&[0, 1], &[2, 3]]).unwrap()).unwrap()
    }

    #[test]
    fn grade_zero_on_block_rotations() {
        let caps = Caps::default();
        let r = setwise_sensitivity(&rot_blocks(1), &caps).unwrap();
        assert_eq!((r.grade0, r.unbounded), (Truth::True, Truth::True));
        assert_eq!(r.witnesses.iter().map(|w| w.t).collect::<Vec<_>>(), vec![1, 3]);
        let r = setwise_sensitivity(&rot_blocks(2), &caps).unwrap();
        assert_eq!((r.grade0, r.unbounded), (Truth::False, Truth::False));
        let id = StructuredSystem::new(Development::identity(4), SetSystem::singletons(4)).unwrap();
        let r = setwise_sensitivity(&id, &caps).unwrap();
        assert_eq!((r.grade0, r.unbounded), (Truth::False, Truth::False));
    }

    #[test]
    fn order_of_block_rotation() {
        let caps = Caps::default();
        // both blocks shift inside themselves, so no base localization is Cantor continuous
        let r = s_ord(&rot_blocks(1), &caps).unwrap();
        assert_eq!(r.order, SOrd::Grade(0));
        assert_eq!(r.witness.map(|w| (w.0, w.1)), Some((1, 1)));
        assert!(r.complete);
        assert_eq!(s_ord(&rot_blocks(2), &caps).unwrap().order, SOrd::Insensitive);
    }

    #[test]
    fn commutator_without_un_image() {
        let dev = Development::new(vec![2, 1, 0]).unwrap();
        let s = StructuredSystem::new(dev, SetSystem::from_lists(3, &[&[0], &[2], &[1, 2]]).unwrap()).unwrap();
        let r = s_ord(&s, &Caps::default()).unwrap();
        assert_eq!((r.order, r.witness), (SOrd::Grade(0), None));
    }

    #[test]
    fn forward_witness_small() {
        let dev = Development::new(vec![1, 1, 0]).unwrap();
        let s = StructuredSystem::new(dev, SetSystem::from_lists(3, &[&[0, 1], &[2]]).unwrap()).unwrap();
        let r = setwise_sensitivity(&s, &Caps::default()).unwrap();
        for w in &r.witnesses {
            assert_eq!(s.commutator_apply(w.t, &w.sensitive_set).unwrap(), w.commutator);
            assert!(!w.commutator.is_empty());
        }
    }

    #[test]
    fn chaotic_order_full_region() {
        let s = rot_blocks(1);
        let caps = Caps::default();
        assert_eq!(chaotic_order(&s, &s.full(), &caps).unwrap().order, s_ord(&s, &caps).unwrap().order);
        let w = StructuredSystem::new(Development::new(vec![1, 1, 0]).unwrap(), SetSystem::singletons(3)).unwrap();
        assert_eq!(chaotic_order(&w, &Mask::singleton(3, 0), &caps), Err(Error::NotInvariant));
    }
}
