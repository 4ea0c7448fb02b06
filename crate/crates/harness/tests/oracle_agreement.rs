use acl_core::coloc::ultracolocalizes;
use acl_core::sensitivity::{fixed_sensitive_at, setwise_sensitivity};
use acl_core::{Caps, Mask, Truth};
use acl_harness::generate::{instance_rng, random_system, Cover};
use acl_harness::oracle::{brute_oracle, Brute, Which, ORACLE_CAP};
use acl_harness::HarnessError;
use rand::Rng;

fn instances(seed: u64, count: u64, only_bijective: bool) -> impl Iterator<Item = acl_core::StructuredSystem> {
    (0..count).map(move |i| {
        let mut rng = instance_rng(seed, i);
        let n = rng.gen_range(1..=8);
        let bijective = only_bijective || rng.gen_bool(0.5);
        random_system(&mut rng, n, None, bijective, Cover::Random).unwrap()
    })
}

fn bits(m: &Mask) -> u64 {
    m.iter().fold(0, |b, x| b | 1 << x)
}

#[test]
fn fixed_sensitivity_matches_exhaustive_scan() {
    for s in instances(7, 150, false) {
        let brute = Brute::new(&s).unwrap();
        for alpha in 0..s.universe() {
            let fast = fixed_sensitive_at(&s, alpha).unwrap();
            let slow = brute.fixed(alpha);
            assert_eq!(fast.sensitive, slow.is_some(), "{s:?} at {alpha}");
            if let (Some((xs, ys)), Some(pair)) = (fast.pair, slow) {
                assert_eq!((bits(&xs), bits(&ys)), pair);
            }
        }
    }
}

#[test]
fn colocalization_matches_exhaustive_scan() {
    for s in instances(8, 100, true) {
        let brute = Brute::new(&s).unwrap();
        let n = s.universe();
        for omega in 0..n {
            for z in 0..n {
                for y in z..n {
                    let fast = ultracolocalizes(&s, z, y, omega).unwrap();
                    assert_eq!(fast.is_some(), brute.colocalizes(z, y, omega), "{s:?}: {z},{y} ~> {omega}");
                    if let Some(v) = fast {
                        assert!(v.replays(&s.dev));
                    }
                }
            }
        }
    }
}

#[test]
fn setwise_grade_zero_matches_exhaustive_scan() {
    let caps = Caps::default();
    for s in instances(9, 150, false) {
        let brute = Brute::new(&s).unwrap();
        let slow = brute.times().into_iter().any(|t| brute.commutator(t).is_some());
        let report = setwise_sensitivity(&s, &caps).unwrap();
        assert_eq!(report.grade0, Truth::from_bool(slow), "{s:?}");
        for w in &report.witnesses {
            assert_eq!(s.commutator_apply(w.t, &w.sensitive_set).unwrap(), w.commutator);
            assert!(!w.commutator.is_empty());
        }
    }
}

#[test]
fn oracle_refuses_large_universes() {
    let mut rng = instance_rng(10, 0);
    let s = random_system(&mut rng, ORACLE_CAP + 1, None, true, Cover::Random).unwrap();
    assert!(matches!(Brute::new(&s), Err(HarnessError::Core(acl_core::Error::CapExceeded { .. }))));
    assert!(brute_oracle(&s, Which::Fixed, &[]).is_err());
}
