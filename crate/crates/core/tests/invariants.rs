use acl_core::comanence::{converges, keuliality};
use acl_core::periodic::TimeDomain;
use acl_core::sensitivity::{fixed_sensitive_at, protosensitive, ProtoKind};
use acl_core::{Development, Mask, PeriodicIntSet, SetSystem, StructuredSystem};
use proptest::prelude::*;

/// Random cover of `0..n`; points no drawn set reaches go into one extra set.
fn cover(n: usize) -> impl Strategy<Value = SetSystem> {
    prop::collection::vec(prop::collection::vec(any::<bool>(), n), 1..=n + 2).prop_map(move |rows| {
        let mut sets: Vec<Mask> = rows.iter().map(|r| Mask::from_fn(n, |i| r[i])).collect();
        let missed = sets.iter().fold(Mask::full(n), |m, s| m.difference(s));
        if !missed.is_empty() {
            sets.push(missed);
        }
        SetSystem::new(n, sets).unwrap()
    })
}

fn system(bijective: bool) -> impl Strategy<Value = StructuredSystem> {
    (1usize..=7).prop_flat_map(move |n| {
        let map = if bijective {
            Just((0..n).collect::<Vec<_>>()).prop_shuffle().boxed()
        } else {
            prop::collection::vec(0..n, n).boxed()
        };
        (map, cover(n)).prop_map(|(map, sys)| StructuredSystem::new(Development::new(map).unwrap(), sys).unwrap())
    })
}

fn mask(n: usize) -> impl Strategy<Value = Mask> {
    prop::collection::vec(any::<bool>(), n).prop_map(move |b| Mask::from_fn(n, |i| b[i]))
}

fn times() -> impl Strategy<Value = PeriodicIntSet> {
    (1u64..=8, any::<bool>()).prop_flat_map(|(period, two_sided)| {
        let residues = prop::collection::vec(any::<bool>(), period as usize);
        let transient = prop::collection::vec(any::<bool>(), 0..=8);
        (residues, transient).prop_map(move |(r, tr)| {
            if two_sided {
                PeriodicIntSet::two_sided(period, r)
            } else {
                PeriodicIntSet::forward(tr, period, r)
            }
        })
    })
}

fn same_domain_pair() -> impl Strategy<Value = (PeriodicIntSet, PeriodicIntSet)> {
    (times(), times()).prop_filter("same domain", |(a, b)| a.domain() == b.domain())
}

proptest! {
    #[test]
    fn closure_is_a_closure_operator((sys, z, w) in (1usize..=9).prop_flat_map(|n| (cover(n), mask(n), mask(n)))) {
        let cl = sys.closure(&z);
        prop_assert!(z.is_subset(&cl));
        prop_assert!(cl.is_subset(&sys.closure(&z.union(&w))));
        prop_assert_eq!(sys.closure(&cl), cl);
    }

    #[test]
    fn periodic_set_algebra_is_pointwise((a, b) in same_domain_pair(), shift in -5i64..=5) {
        let lo = if a.domain() == TimeDomain::Integers { -40 } else { 0 };
        let union = a.union(&b);
        let meet = a.intersection(&b);
        let xor = a.symmetric_difference(&b);
        let moved = a.shifted(shift);
        for t in lo..40 {
            prop_assert_eq!(union.contains(t), a.contains(t) || b.contains(t));
            prop_assert_eq!(meet.contains(t), a.contains(t) && b.contains(t));
            prop_assert_eq!(xor.contains(t), a.contains(t) != b.contains(t));
            prop_assert_eq!(a.normalized().contains(t), a.contains(t));
            if t - shift >= lo {
                prop_assert_eq!(moved.contains(t), a.contains(t - shift));
            }
        }
        prop_assert_eq!(a.normalized(), a.clone());
    }

    #[test]
    fn keuliality_is_monotone_in_run_length(x in times(), run in 2u64..=10, unbounded: bool, total: bool) {
        if keuliality(&x, run, unbounded, total).unwrap() {
            prop_assert!(keuliality(&x, run - 1, unbounded, total).unwrap());
        }
        if keuliality(&x, run, true, total).unwrap() {
            prop_assert!(keuliality(&x, run, false, total).unwrap());
        }
    }

    #[test]
    fn convergence_survives_coarsening(
        (coarse, extra, seq, y) in (1usize..=8).prop_flat_map(|n| (cover(n), cover(n), prop::collection::vec(0..n, 1..6), 0..n))
    ) {
        let mut sets = coarse.sets().to_vec();
        sets.extend_from_slice(extra.sets());
        let fine = SetSystem::new(coarse.universe(), sets).unwrap();
        if converges(&fine, &seq, y) {
            prop_assert!(converges(&coarse, &seq, y));
        }
        let mut constant = seq.clone();
        constant.push(y);
        prop_assert!(converges(&fine, &constant, y));
    }

    #[test]
    fn first_kind_protosensitivity_implies_second_for_bijections(s in system(true)) {
        for alpha in 0..s.universe() {
            if protosensitive(&s, alpha, ProtoKind::First).unwrap() {
                prop_assert!(protosensitive(&s, alpha, ProtoKind::Second).unwrap());
            }
        }
    }

    #[test]
    fn fixed_sensitivity_implies_first_kind_protosensitivity(s in system(false)) {
        for alpha in 0..s.universe() {
            let v = fixed_sensitive_at(&s, alpha).unwrap();
            if v.sensitive {
                prop_assert!(protosensitive(&s, alpha, ProtoKind::First).unwrap());
                let (xs, ys) = v.pair.unwrap();
                prop_assert!(!xs.intersects(&ys));
                for (a, x, y, t) in v.witnesses {
                    prop_assert!(a.contains(alpha) && a.contains(x) && a.contains(y));
                    prop_assert!(xs.contains(s.dev.evolve(x, t).unwrap()));
                    prop_assert!(ys.contains(s.dev.evolve(y, t).unwrap()));
                }
            }
        }
    }
}
