use alloc::vec::Vec;

use crate::{Error, Mask, StructuredSystem};

/// Distance `d°` on disjoint pairs of localizations, derived from the metric table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairDistance {
    Hausdorff,
    MinDistance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantifiedVerdict {
    pub sensitive: bool,
    /// Largest `δ(α)` achievable, when every localization of `α` splits at all.
    pub delta: Option<f64>,
    /// Per localization `A ∋ α`: `(A, x, y, t, X, Y)` attaining that localization's best split.
    pub witnesses: Vec<(Mask, usize, usize, i64, Mask, Mask)>,
}

/// Best disjoint split per ordered pair of states, filled on demand: `(d°, X, Y)` as indices
/// into the structuring.
struct SplitCache {
    n: usize,
    best: Vec<Option<Option<(f64, usize, usize)>>>,
}

impl SplitCache {
    fn new(n: usize) -> Self {
        SplitCache { n, best: alloc::vec![None; n * n] }
    }

    fn get(&mut self, s: &StructuredSystem, eval: &impl Fn(&Mask, &Mask) -> f64, u: usize, v: usize) -> Option<(f64, usize, usize)> {
        *self.best[u * self.n + v].get_or_insert_with(|| {
            let sets = s.sys.sets();
            let mut best: Option<(f64, usize, usize)> = None;
            for (i, xs) in sets.iter().enumerate().filter(|(_, xs)| xs.contains(u)) {
                for (j, ys) in sets.iter().enumerate().filter(|(_, ys)| ys.contains(v) && !ys.intersects(xs)) {
                    let value = eval(xs, ys);
                    if best.is_none_or(|b| value > b.0) {
                        best = Some((value, i, j));
                    }
                }
            }
            best
        })
    }
}

/// Quantified sensitivity at `alpha`: every localization of `alpha` splits, at arbitrarily
/// large times, into disjoint localizations at `d°`-distance at least `δ(α) > 0`.
pub fn quantified_sensitive_at(s: &StructuredSystem, dist: PairDistance, alpha: usize) -> Result<QuantifiedVerdict, Error> {
    let n = s.universe();
    if alpha >= n {
        return Err(Error::OutOfRange { index: alpha, universe: n });
    }
    verdict_at(s, dist, alpha, &mut SplitCache::new(n))
}

/// [`quantified_sensitive_at`] for every state, sharing the pair computations.
pub fn quantified_field(s: &StructuredSystem, dist: PairDistance) -> Result<Vec<QuantifiedVerdict>, Error> {
    let mut cache = SplitCache::new(s.universe());
    (0..s.universe()).map(|alpha| verdict_at(s, dist, alpha, &mut cache)).collect()
}

fn verdict_at(s: &StructuredSystem, dist: PairDistance, alpha: usize, cache: &mut SplitCache) -> Result<QuantifiedVerdict, Error> {
    let d = s.metric()?;
    let n = s.universe();
    let eval = |x: &Mask, y: &Mask| match dist {
        PairDistance::Hausdorff => d.hausdorff(x, y),
        PairDistance::MinDistance => d.min_distance(x, y),
    };
    let sets = s.sys.sets();
    let mut delta = f64::INFINITY;
    let mut witnesses = Vec::new();
    for a in s.sys.containing(alpha).filter(|a| !a.is_empty()) {
        let mut seen = alloc::vec![false; n * n];
        let mut best: Option<(f64, (Mask, usize, usize, i64, Mask, Mask))> = None;
        for x in a {
            for y in a {
                for t in s.dev.recurrent_times(x, y) {
                    let (u, v) = (s.dev.ev(x, t), s.dev.ev(y, t));
                    if core::mem::replace(&mut seen[u * n + v], true) {
                        continue;
                    }
                    if let Some((value, i, j)) = cache.get(s, &eval, u, v) {
                        if best.as_ref().is_none_or(|b| value > b.0) {
                            best = Some((value, (a.clone(), x, y, t, sets[i].clone(), sets[j].clone())));
                        }
                    }
                }
            }
        }
        match best {
            Some((value, w)) => {
                delta = delta.min(value);
                witnesses.push(w);
            }
            None => return Ok(QuantifiedVerdict { sensitive: false, delta: None, witnesses: Vec::new() }),
        }
    }
    if witnesses.is_empty() {
        return Ok(QuantifiedVerdict { sensitive: false, delta: None, witnesses });
    }
    Ok(QuantifiedVerdict { sensitive: delta > 0.0, delta: Some(delta), witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Development, MetricTable, SetSystem};
    use alloc::vec;

    #[test]
    fn whole_space_has_no_pairs() {
        let s = StructuredSystem::new(Development::new(vec![1, 2, 0]).unwrap(), SetSystem::from_lists(3, &[&[0, 1, 2]]).unwrap())
            .unwrap()
            .with_metric(MetricTable::discrete(3))
            .unwrap();
        let v = quantified_sensitive_at(&s, PairDistance::Hausdorff, 0).unwrap();
        assert!(!v.sensitive);
        assert_eq!(v.delta, None);
    }

    #[test]
    fn needs_metric() {
        let s = StructuredSystem::new(Development::identity(2), SetSystem::singletons(2)).unwrap();
        assert_eq!(quantified_sensitive_at(&s, PairDistance::MinDistance, 0), Err(Error::NoMetric));
    }

    #[test]
    fn coarse_member_splits() {
        let sys = SetSystem::from_lists(3, &[&[0], &[1], &[0, 1, 2]]).unwrap();
        let s = StructuredSystem::new(Development::identity(3), sys).unwrap().with_metric(MetricTable::discrete(3)).unwrap();
        let v = quantified_sensitive_at(&s, PairDistance::MinDistance, 2).unwrap();
        assert!(v.sensitive);
        assert_eq!(v.delta, Some(1.0));
        assert!(!quantified_sensitive_at(&s, PairDistance::MinDistance, 0).unwrap().sensitive);
    }
}
