//! Distance tables over the universe and the product-metric transfer onto trajectory charts.

use alloc::vec::Vec;

use crate::{Development, Error, Mask};

/// A nonnegative `n × n` distance table with validated flags.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTable {
    n: usize,
    d: Vec<f64>,
    symmetric: bool,
    identifying: bool,
    triangle: bool,
}

impl MetricTable {
    /// Validates a row-major table: finite, nonnegative, diagonal minimal.
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self, Error> {
        if d.len() != n * n {
            return Err(Error::MetricShape("table is not n × n"));
        }
        if d.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::MetricShape("entries must be finite and nonnegative"));
        }
        let at = |x: usize, y: usize| d[x * n + y];
        if (0..n).any(|x| (0..n).any(|y| at(x, x) > at(x, y))) {
            return Err(Error::MetricShape("diagonal is not minimal"));
        }
        let symmetric = (0..n).all(|x| (0..x).all(|y| at(x, y) == at(y, x)));
        let identifying = (0..n).all(|x| (0..n).all(|y| (at(x, y) == 0.0) == (x == y)));
        let triangle = (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| at(x, z) <= at(x, y) + at(y, z) + 1e-12 * (1.0 + at(x, z))))
        });
        Ok(MetricTable { n, d, symmetric, identifying, triangle })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, Error> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::MetricShape("rows have unequal length"));
        }
        MetricTable::new(n, rows.concat())
    }

    /// Circle metric on the `n`-point grid of the unit circle: `min(|i-j|, n-|i-j|) / n`.
    pub fn circle(n: usize) -> Self {
        let d = (0..n)
            .flat_map(|i| {
                (0..n).map(move |j| {
                    let k = i.abs_diff(j);
                    k.min(n - k) as f64 / n as f64
                })
            })
            .collect();
        MetricTable { n, d, symmetric: true, identifying: true, triangle: true }
    }

    /// The discrete metric (1 off the diagonal).
    pub fn discrete(n: usize) -> Self {
        let d = (0..n).flat_map(|i| (0..n).map(move |j| if i == j { 0.0 } else { 1.0 })).collect();
        MetricTable { n, d, symmetric: true, identifying: true, triangle: true }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn d(&self, x: usize, y: usize) -> f64 {
        self.d[x * self.n + y]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.d.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_identifying(&self) -> bool {
        self.identifying
    }

    pub fn satisfies_triangle(&self) -> bool {
        self.triangle
    }

    pub fn is_metric(&self) -> bool {
        self.symmetric && self.identifying && self.triangle
    }

    /// Smallest positive distance, the natural grid scale; `None` when all distances vanish.
    pub fn resolution(&self) -> Option<f64> {
        self.d.iter().copied().filter(|&v| v > 0.0).reduce(f64::min)
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Diameter of a subset.
    pub fn set_diameter(&self, s: &Mask) -> f64 {
        let mut best = 0.0f64;
        for x in s {
            for y in s {
                best = best.max(self.d(x, y));
            }
        }
        best
    }

    /// Sorted distinct distance values, zero included.
    pub fn attained(&self) -> Vec<f64> {
        let mut v = self.d.clone();
        v.push(0.0);
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Closed ball `{y : d(x,y) ≤ r}`.
    pub fn ball(&self, x: usize, r: f64) -> Mask {
        Mask::from_fn(self.n, |y| self.d(x, y) <= r)
    }

    /// Hausdorff distance of two subsets; `+∞` when exactly one is empty.
    pub fn hausdorff(&self, a: &Mask, b: &Mask) -> f64 {
        match (a.is_empty(), b.is_empty()) {
            (true, true) => return 0.0,
            (true, false) | (false, true) => return f64::INFINITY,
            _ => {}
        }
        let dir = |p: &Mask, q: &Mask| {
            p.iter().map(|x| q.iter().map(|y| self.d(x, y)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
        };
        dir(a, b).max(dir(b, a))
    }

    /// Smallest pointwise distance between two subsets; `+∞` when one is empty.
    pub fn min_distance(&self, a: &Mask, b: &Mask) -> f64 {
        a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).map(|(x, y)| self.d(x, y)).fold(f64::INFINITY, f64::min)
    }

    /// Pullback along a bijection: `d[q⁻¹](x, y) = d(q⁻¹x, q⁻¹y)`.
    pub fn pullback(&self, q: &[usize]) -> Result<Self, Error> {
        let inv = invert(q)?;
        let n = self.n;
        let d = (0..n).flat_map(|x| (0..n).map(|y| (x, y)).collect::<Vec<_>>()).map(|(x, y)| self.d(inv[x], inv[y])).collect();
        Ok(MetricTable { n, d, symmetric: self.symmetric, identifying: self.identifying, triangle: self.triangle })
    }
}

pub(crate) fn invert(q: &[usize]) -> Result<Vec<usize>, Error> {
    let n = q.len();
    let mut inv = alloc::vec![usize::MAX; n];
    for (x, &y) in q.iter().enumerate() {
        if y >= n || inv[y] != usize::MAX {
            return Err(Error::NotABijection);
        }
        inv[y] = x;
    }
    Ok(inv)
}

/// Norms on pairs `(a, b)` of nonnegative reals used to combine chart and phase distances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairNorm {
    Max,
    Sum,
    Euclid,
}

impl PairNorm {
    pub fn eval(self, a: f64, b: f64) -> f64 {
        match self {
            PairNorm::Max => a.max(b),
            PairNorm::Sum => a + b,
            PairNorm::Euclid => libm::sqrt(a * a + b * b),
        }
    }
}

/// Each state labelled by `(trajectory id, phase)`; labels must be pairwise distinct so every
/// per-trajectory time map is injective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrajectoryCharts {
    labels: Vec<(usize, i64)>,
}

impl TrajectoryCharts {
    pub fn new(labels: Vec<(usize, i64)>) -> Result<Self, Error> {
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::CyclicOrbitUnsupported);
        }
        Ok(TrajectoryCharts { labels })
    }

    /// Reads charts off a development by walking each orbit from its initial-basis state for
    /// `window` steps. Fails as soon as an orbit revisits a state inside the window.
    pub fn from_development(dev: &Development, window: usize) -> Result<Self, Error> {
        let n = dev.universe();
        let mut labels = alloc::vec![None; n];
        let mut chart = 0;
        for start in 0..n {
            if labels[start].is_some() {
                continue;
            }
            let mut seen = Mask::empty(n);
            let mut z = start;
            for phase in 0..window.max(1) {
                if seen.contains(z) {
                    return Err(Error::CyclicOrbitUnsupported);
                }
                seen.insert(z);
                if labels[z].is_none() {
                    labels[z] = Some((chart, phase as i64));
                }
                z = dev.step(z);
            }
            chart += 1;
        }
        TrajectoryCharts::new(labels.into_iter().map(|l| l.expect("every state labelled")).collect())
    }

    pub fn labels(&self) -> &[(usize, i64)] {
        &self.labels
    }
}

/// Product-metric transfer: `d((i,p),(j,q)) = η(dX(i,j), d1(p,q))`.
pub fn transfer_metric(
    charts: &TrajectoryCharts,
    d1: impl Fn(i64, i64) -> f64,
    dx: impl Fn(usize, usize) -> f64,
    eta: PairNorm,
) -> Result<MetricTable, Error> {
    let l = &charts.labels;
    let n = l.len();
    let mut d = Vec::with_capacity(n * n);
    for &(i, p) in l {
        for &(j, q) in l {
            d.push(eta.eval(dx(i, j), d1(p, q)));
        }
    }
    MetricTable::new(n, d)
}
