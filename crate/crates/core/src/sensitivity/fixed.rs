use alloc::vec::Vec;

use crate::{Error, Mask, StructuredSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedVerdict {
    pub sensitive: bool,
    /// The disjoint pair `(X, Y)` every localization of `α` splits into.
    pub pair: Option<(Mask, Mask)>,
    /// Per localization `A ∋ α`: `(A, x, y, t)` with `ξ(x,t) ∈ X`, `ξ(y,t) ∈ Y`, `t` recurrent.
    pub witnesses: Vec<(Mask, usize, usize, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProtoKind {
    First,
    Second,
}

fn split_witness(s: &StructuredSystem, a: &Mask, x_set: &Mask, y_set: &Mask) -> Option<(usize, usize, i64)> {
    for x in a {
        for y in a {
            for t in s.dev.recurrent_times(x, y) {
                if x_set.contains(s.dev.ev(x, t)) && y_set.contains(s.dev.ev(y, t)) {
                    return Some((x, y, t));
                }
            }
        }
    }
    None
}

/// Fixed sensitivity at `alpha`: one disjoint pair of localizations into which every
/// localization of `alpha` splits at arbitrarily large times.
pub fn fixed_sensitive_at(s: &StructuredSystem, alpha: usize) -> Result<FixedVerdict, Error> {
    let n = s.universe();
    if alpha >= n {
        return Err(Error::OutOfRange { index: alpha, universe: n });
    }
    let locs: Vec<&Mask> = s.sys.containing(alpha).filter(|a| !a.is_empty()).collect();
    // joint recurrent states per localization, as an n×n table
    let joint: Vec<Vec<bool>> = locs
        .iter()
        .map(|a| {
            let mut j = alloc::vec![false; n * n];
            for x in a.iter() {
                for y in a.iter() {
                    for t in s.dev.recurrent_times(x, y) {
                        j[s.dev.ev(x, t) * n + s.dev.ev(y, t)] = true;
                    }
                }
            }
            j
        })
        .collect();
    for (xs, ys) in s.sys.disjoint_pairs() {
        let splits = |j: &Vec<bool>| xs.iter().any(|a| ys.iter().any(|b| j[a * n + b]));
        if joint.iter().all(splits) {
            let witnesses = locs
                .iter()
                .map(|a| {
                    let (x, y, t) = split_witness(s, a, &xs, &ys).expect("joint table is exact");
                    ((*a).clone(), x, y, t)
                })
                .collect();
            return Ok(FixedVerdict { sensitive: true, pair: Some((xs, ys)), witnesses });
        }
    }
    Ok(FixedVerdict { sensitive: false, pair: None, witnesses: Vec::new() })
}

/// Protosensitivity of the first kind (one `B` escaped by the images of every localization of
/// `alpha` at some time) or of the second kind (images escape some `B` at arbitrarily large
/// times).
pub fn protosensitive(s: &StructuredSystem, alpha: usize, kind: ProtoKind) -> Result<bool, Error> {
    let n = s.universe();
    if alpha >= n {
        return Err(Error::OutOfRange { index: alpha, universe: n });
    }
    let locs: Vec<&Mask> = s.sys.containing(alpha).filter(|a| !a.is_empty()).collect();
    Ok(match kind {
        ProtoKind::First => {
            let trajectories: Vec<Mask> = (0..n).map(|z| s.dev.trajectory(z)).collect();
            s.sys
                .nonempty()
                .any(|b| locs.iter().all(|a| a.iter().any(|z| !trajectories[z].is_subset(b))))
        }
        ProtoKind::Second => {
            let mut core = Mask::full(n);
            for b in s.sys.nonempty() {
                core.intersect_with(b);
            }
            locs.iter().all(|a| {
                a.iter().any(|z| s.dev.orbit(z).cycle.iter().any(|&w| !core.contains(w)))
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Development, SetSystem};
    use alloc::vec;

    fn two_cycles() -> StructuredSystem {
        let sys = SetSystem::from_lists(6, &[&[1, 4], &[0, 4], &[3], &[2, 5]]).unwrap();
        StructuredSystem::new(Development::new(vec![1, 2, 0, 4, 5, 3]).unwrap(), sys).unwrap()
    }

    #[test]
    fn identity_with_coarse_member_is_fixed_sensitive() {
        let sys = SetSystem::from_lists(3, &[&[0], &[1], &[0, 1, 2]]).unwrap();
        let s = StructuredSystem::new(Development::identity(3), sys).unwrap();
        let v = fixed_sensitive_at(&s, 2).unwrap();
        assert!(v.sensitive);
        assert_eq!(v.pair.unwrap().0.to_vec(), vec![0]);
        assert!(!fixed_sensitive_at(&s, 0).unwrap().sensitive);
    }

    #[test]
    fn two_cycle_fixture() {
        let s = two_cycles();
        let v = fixed_sensitive_at(&s, 1).unwrap();
        assert!(v.sensitive);
        let (xs, ys) = v.pair.unwrap();
        assert_eq!((xs.to_vec(), ys.to_vec()), (vec![0, 4], vec![3]));
        assert_eq!((v.witnesses[0].1, v.witnesses[0].2), (1, 4));
        let v = fixed_sensitive_at(&s, 4).unwrap();
        assert!(!v.sensitive);
    }

    #[test]
    fn whole_space_structuring() {
        let sys = SetSystem::from_lists(3, &[&[0, 1, 2]]).unwrap();
        let s = StructuredSystem::new(Development::new(vec![1, 2, 0]).unwrap(), sys).unwrap();
        assert!(!fixed_sensitive_at(&s, 0).unwrap().sensitive);
        assert!(!protosensitive(&s, 0, ProtoKind::First).unwrap());
        assert!(!protosensitive(&s, 0, ProtoKind::Second).unwrap());
    }

    #[test]
    fn separated_singletons_are_proto_second() {
        let s = StructuredSystem::new(Development::new(vec![1, 0, 2]).unwrap(), SetSystem::singletons(3)).unwrap();
        assert!(protosensitive(&s, 0, ProtoKind::Second).unwrap());
        assert!(protosensitive(&s, 0, ProtoKind::First).unwrap());
    }
}
