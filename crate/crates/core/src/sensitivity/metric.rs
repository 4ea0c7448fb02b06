use alloc::vec::Vec;

use crate::{Development, Error, MetricTable};

/// Verdict of pointwise metric sensitivity at grid scale `scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pointwise {
    pub sensitive: bool,
    /// Largest separation constant certified at this scale.
    pub epsilon: Option<f64>,
    pub scale: f64,
    /// Neighbour and recurrent time attaining `epsilon`.
    pub witness: Option<(usize, i64)>,
}

/// Per-state supremum of admissible separation constants; `-∞` marks an empty admissible set.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionField {
    pub values: Vec<f64>,
    pub scale: f64,
}

impl ResolutionField {
    /// Whether `delta` lies in the admissible set `(0, Δ̂(x))`.
    pub fn admits(&self, x: usize, delta: f64) -> bool {
        delta > 0.0 && delta < self.values[x]
    }
}

fn grid_scale(d: &MetricTable, scale: Option<f64>) -> Result<f64, Error> {
    match (d.resolution(), scale) {
        (Some(h), Some(s)) if s < h => Err(Error::ScaleBelowResolution),
        (_, Some(s)) => Ok(s),
        (Some(h), None) => Ok(h),
        (None, None) => Ok(0.0),
    }
}

/// Max over `y` in the closed `da`-ball of radius `h` and over recurrent joint times of the
/// `db` separation, with the attaining `(y, t)`. Only separations beyond the ball's own
/// `db`-radius count, so a neighbour that merely stays where it started certifies nothing.
fn separation(dev: &Development, da: &MetricTable, db: &MetricTable, x: usize, h: f64) -> Option<(f64, usize, i64)> {
    let ball: Vec<usize> = (0..dev.universe()).filter(|&y| da.d(y, x) <= h).collect();
    let radius = ball.iter().map(|&y| db.d(x, y)).fold(0.0, f64::max);
    let mut best: Option<(f64, usize, i64)> = None;
    for &y in &ball {
        for t in dev.recurrent_times(x, y) {
            let v = db.d(dev.ev(x, t), dev.ev(y, t));
            if v > radius && best.is_none_or(|b| v > b.0) {
                best = Some((v, y, t));
            }
        }
    }
    best
}

/// Whether `x` is metrically sensitive: some neighbour at grid scale separates from `x` by a
/// fixed positive amount at arbitrarily large times.
pub fn metric_pointwise_sensitive(
    dev: &Development,
    d: &MetricTable,
    x: usize,
    two_sided: bool,
    scale: Option<f64>,
) -> Result<Pointwise, Error> {
    if two_sided && !dev.is_bijective() {
        return Err(Error::NegativeTimeUnsupported);
    }
    let h = grid_scale(d, scale)?;
    let best = separation(dev, d, d, x, h);
    Ok(Pointwise {
        sensitive: best.is_some(),
        epsilon: best.map(|b| b.0),
        scale: h,
        witness: best.map(|b| (b.1, b.2)),
    })
}

/// `Δ̂(x)` for every state, neighbourhoods from `da` and separation from `db`.
pub fn resolution_field(
    dev: &Development,
    da: &MetricTable,
    db: &MetricTable,
    scale: Option<f64>,
) -> Result<ResolutionField, Error> {
    let n = dev.universe();
    if da.universe() != n || db.universe() != n {
        return Err(Error::UniverseMismatch);
    }
    let h = grid_scale(da, scale)?;
    let values = (0..n)
        .map(|x| separation(dev, da, db, x, h).map_or(f64::NEG_INFINITY, |b| b.0))
        .collect();
    Ok(ResolutionField { values, scale: h })
}

/// Times `ϑ` with `|ϑ| ≤ t` (or `0 ≤ ϑ ≤ t`) up to repetition of the powers.
fn horizon(dev: &Development, t: u64) -> Vec<i64> {
    let reach = t.min(dev.index() as u64 + dev.order()) as i64;
    if dev.is_bijective() {
        (-reach..=reach).collect()
    } else {
        (0..=reach).collect()
    }
}

/// `B(δ, t)`: the largest attained `da` value `q` such that every pair within `q` stays within
/// `δ` in `db` over the horizon `t`. `None` when even `q = 0` fails.
pub fn comanence_value(dev: &Development, da: &MetricTable, db: &MetricTable, delta: f64, t: u64) -> Option<f64> {
    let n = dev.universe();
    let times = horizon(dev, t);
    let powers: Vec<Vec<usize>> = times.iter().map(|&s| dev.power(s).expect("admissible horizon")).collect();
    let mut worst = f64::INFINITY;
    for x in 0..n {
        for y in 0..n {
            if da.d(x, y) < worst && powers.iter().any(|p| db.d(p[x], p[y]) > delta) {
                worst = da.d(x, y);
            }
        }
    }
    da.attained().into_iter().rev().find(|&q| q < worst)
}

/// Whether `B(δ, t)` is defined for every positive attained `δ` and every horizon. `B` is
/// monotone in both arguments, so the smallest `δ` at the full horizon decides.
pub fn is_comanent(dev: &Development, da: &MetricTable, db: &MetricTable) -> bool {
    let Some(delta) = db.resolution() else {
        return true;
    };
    comanence_value(dev, da, db, delta, dev.index() as u64 + dev.order()).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(n: usize, k: usize) -> Development {
        Development::new((0..n).map(|i| (i + k) % n).collect()).unwrap()
    }

    #[test]
    fn rotation_is_insensitive() {
        let d = MetricTable::circle(16);
        let r = rot(16, 3);
        for x in 0..16 {
            assert!(!metric_pointwise_sensitive(&r, &d, x, true, None).unwrap().sensitive);
        }
        let f = resolution_field(&r, &d, &d, None).unwrap();
        assert!(f.values.iter().all(|v| *v == f64::NEG_INFINITY));
    }

    #[test]
    fn odd_doubling_separates() {
        let n = 15;
        let dbl = Development::new((0..n).map(|i| 2 * i % n).collect()).unwrap();
        let d = MetricTable::circle(n);
        let p = metric_pointwise_sensitive(&dbl, &d, 0, true, None).unwrap();
        assert!(p.sensitive);
        assert_eq!(p.epsilon, Some(7.0 / 15.0));
    }

    #[test]
    fn scale_below_resolution() {
        let d = MetricTable::circle(8);
        assert_eq!(
            metric_pointwise_sensitive(&rot(8, 1), &d, 0, false, Some(0.01)),
            Err(Error::ScaleBelowResolution)
        );
    }

    #[test]
    fn one_sided_needs_no_inverse() {
        let w = Development::new(alloc::vec![1, 1, 0]).unwrap();
        let d = MetricTable::discrete(3);
        assert_eq!(metric_pointwise_sensitive(&w, &d, 0, true, None), Err(Error::NegativeTimeUnsupported));
        assert!(metric_pointwise_sensitive(&w, &d, 0, false, None).is_ok());
    }

    #[test]
    fn comanence_of_rotation() {
        let d = MetricTable::circle(8);
        let r = rot(8, 1);
        assert_eq!(comanence_value(&r, &d, &d, 0.25, 5), Some(0.25));
        assert_eq!(comanence_value(&r, &d, &d, 0.3, 5), Some(0.25));
        assert_eq!(comanence_value(&r, &d, &d, 1.0, 5), Some(0.5));
        assert!(is_comanent(&r, &d, &d));
    }

    #[test]
    fn single_state_field() {
        let d = MetricTable::discrete(1);
        let f = resolution_field(&Development::identity(1), &d, &d, None).unwrap();
        assert_eq!(f.values, alloc::vec![f64::NEG_INFINITY]);
    }
}
