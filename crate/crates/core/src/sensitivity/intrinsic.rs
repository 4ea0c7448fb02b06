use crate::periodic::{PeriodicIntSet, TimeDomain};
use crate::{lcm, Development, Error, Mask};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntrinsicVerdict {
    pub fixed: bool,
    /// Always false on finite universes: time fibres of eventually periodic orbits are
    /// periodic, so no expanding fibres without accumulation occur.
    pub unfixed: bool,
    /// `(t⋆, fibre)` with the fibre `ξ(z,·)⁻¹({ξ(z,t⋆)})` holding more than one instant.
    pub witness: Option<(i64, PeriodicIntSet)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PseudoKind {
    Active,
    Phasic,
}

fn domain_of(dev: &Development) -> TimeDomain {
    if dev.is_bijective() {
        TimeDomain::Integers
    } else {
        TimeDomain::Naturals
    }
}

/// Intrinsic sensitivity of the trajectory through `z`, read on integer time: the time map is
/// non-injective at some `t⋆`.
pub fn intrinsic_sensitivity(dev: &Development, z: usize) -> Result<IntrinsicVerdict, Error> {
    let n = dev.universe();
    if z >= n {
        return Err(Error::OutOfRange { index: z, universe: n });
    }
    let span = (dev.preperiod(z) + dev.period(z)) as i64;
    for t in 0..span {
        let fibre = dev.time_preimage(z, &Mask::singleton(n, dev.ev(z, t)));
        if fibre.is_unbounded() || fibre.transient_members().count() > 1 {
            return Ok(IntrinsicVerdict { fixed: true, unfixed: false, witness: Some((t, fibre)) });
        }
    }
    Ok(IntrinsicVerdict { fixed: false, unfixed: false, witness: None })
}

/// Pseudocommutators of the trajectory through `z`: the active form `ξ(z,·)⁻¹(ξ^t ξ(z, X))`,
/// and the phasic form, its symmetric difference with `X + {t}`.
pub fn pseudocommutator(
    dev: &Development,
    z: usize,
    t: i64,
    x: &PeriodicIntSet,
    kind: PseudoKind,
) -> Result<PeriodicIntSet, Error> {
    let n = dev.universe();
    if z >= n {
        return Err(Error::OutOfRange { index: z, universe: n });
    }
    if x.domain() != domain_of(dev) {
        return Err(Error::BadParams("time set domain does not match the generator"));
    }
    if t < 0 && !dev.is_bijective() {
        return Err(Error::NegativeTimeUnsupported);
    }
    let joint = lcm(x.period(), dev.period(z) as u64) as i64;
    let reach = x.start() as i64 + dev.preperiod(z) as i64 + joint;
    let mut states = Mask::empty(n);
    for s in x.window(0, reach) {
        states.insert(dev.ev(z, s + t));
    }
    let active = dev.time_preimage(z, &states);
    Ok(match kind {
        PseudoKind::Active => active,
        PseudoKind::Phasic => active.symmetric_difference(&x.shifted(t)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cycles_are_fixed_intrinsic() {
        let r = Development::new(vec![1, 2, 0]).unwrap();
        let v = intrinsic_sensitivity(&r, 0).unwrap();
        assert!(v.fixed && !v.unfixed);
        assert_eq!(v.witness.unwrap(), (0, PeriodicIntSet::from_residues(3, &[0])));
        let f = Development::identity(1);
        assert!(intrinsic_sensitivity(&f, 0).unwrap().fixed);
    }

    #[test]
    fn transient_start_witness() {
        let w = Development::new(vec![1, 2, 2]).unwrap();
        let v = intrinsic_sensitivity(&w, 0).unwrap();
        assert_eq!(v.witness.map(|(t, _)| t), Some(2));
    }

    #[test]
    fn phasic_vanishes_on_period_compatible_sets() {
        let r = Development::new(vec![1, 2, 3, 0]).unwrap();
        let x = PeriodicIntSet::from_residues(4, &[0, 1]);
        for t in -5..5 {
            assert!(pseudocommutator(&r, 0, t, &x, PseudoKind::Phasic).unwrap().is_empty());
            assert_eq!(pseudocommutator(&r, 0, t, &x, PseudoKind::Active).unwrap(), x.shifted(t));
        }
        let coarse = PeriodicIntSet::from_residues(8, &[0]);
        let p = pseudocommutator(&r, 0, 0, &coarse, PseudoKind::Phasic).unwrap();
        assert_eq!(p, PeriodicIntSet::from_residues(8, &[4]));
    }

    #[test]
    fn forward_domain_checks() {
        let w = Development::new(vec![1, 1]).unwrap();
        let x = PeriodicIntSet::forward(vec![true], 1, vec![false]);
        assert_eq!(pseudocommutator(&w, 0, -1, &x, PseudoKind::Active), Err(Error::NegativeTimeUnsupported));
        let two = PeriodicIntSet::from_residues(2, &[0]);
        assert!(pseudocommutator(&w, 0, 1, &two, PseudoKind::Active).is_err());
        let a = pseudocommutator(&w, 0, 1, &x, PseudoKind::Active).unwrap();
        assert!(!a.contains(0) && a.contains(1) && a.contains(9));
    }
}
