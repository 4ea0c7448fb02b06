//! Seeded random instances and the curated example systems.

use std::fmt;
use std::str::FromStr;

use acl_core::{Development, Mask, MetricTable, SetSystem, StructuredSystem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};
use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Random permutation with a random cover.
    RandomPerm,
    /// Random self-map (a wider-sense flow) with a random cover.
    RandomMap,
    /// Random permutation with a random cover plus all singletons.
    DeterministicCover,
    /// Random permutation with a random partition.
    PartitionCover,
    GridRotation,
    GridDoubling,
    TwoCyclesColoc,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::RandomPerm,
        Kind::RandomMap,
        Kind::DeterministicCover,
        Kind::PartitionCover,
        Kind::GridRotation,
        Kind::GridDoubling,
        Kind::TwoCyclesColoc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::RandomPerm => "random_perm",
            Kind::RandomMap => "random_map",
            Kind::DeterministicCover => "deterministic_cover",
            Kind::PartitionCover => "partition_cover",
            Kind::GridRotation => "grid_rotation",
            Kind::GridDoubling => "grid_doubling",
            Kind::TwoCyclesColoc => "two_cycles_coloc",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| HarnessError::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    /// Universe size, or grid size `N`.
    pub n: usize,
    /// Rotation step.
    pub k: usize,
    /// Number of random localizations; defaults to `n / 2 + 2`.
    pub sets: Option<usize>,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params { n: 8, k: 1, sets: None, seed: 0 }
    }
}

/// Generator stream for instance `index` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn generate(kind: Kind, p: &Params) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let seed_label = format!("seed={}", p.seed);
    let random_n = || {
        if p.n == 0 || p.n > 64 {
            Err(HarnessError::BadParams(format!("random universes need 1 <= n <= 64, got {}", p.n)))
        } else {
            Ok(p.n)
        }
    };
    let labels = |extra: Vec<String>| -> Vec<String> { [vec![kind.name().to_string()], extra].concat() };
    let system = match kind {
        Kind::RandomPerm => random_system(&mut rng, random_n()?, p.sets, true, Cover::Random)?,
        Kind::RandomMap => random_system(&mut rng, random_n()?, p.sets, false, Cover::Random)?,
        Kind::DeterministicCover => random_system(&mut rng, random_n()?, p.sets, true, Cover::WithSingletons)?,
        Kind::PartitionCover => random_system(&mut rng, random_n()?, p.sets, true, Cover::Partition)?,
        Kind::GridRotation => return Ok(Instance::new(grid_rotation(p.n, p.k)?, labels(vec![format!("N={}", p.n), format!("k={}", p.k)]))),
        Kind::GridDoubling => return Ok(Instance::new(grid_doubling(p.n)?, labels(vec![format!("N={}", p.n)]))),
        Kind::TwoCyclesColoc => return Ok(Instance::new(two_cycles_coloc(), labels(vec![]))),
    };
    Ok(Instance::new(system, labels(vec![format!("n={}", p.n), seed_label])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cover {
    Random,
    WithSingletons,
    Partition,
}

/// A random system on `n` states: a permutation or an arbitrary self-map, and a cover of the
/// requested shape.
pub fn random_system(rng: &mut impl Rng, n: usize, sets: Option<usize>, bijective: bool, cover: Cover) -> Result<StructuredSystem> {
    let map: Vec<usize> = if bijective {
        let mut m: Vec<usize> = (0..n).collect();
        m.shuffle(rng);
        m
    } else {
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    };
    let family = match cover {
        Cover::Partition => random_partition(rng, n),
        Cover::Random => random_cover(rng, n, sets.unwrap_or(n / 2 + 2)),
        Cover::WithSingletons => {
            let mut f = random_cover(rng, n, sets.unwrap_or(n / 2 + 2));
            f.extend((0..n).map(|x| Mask::singleton(n, x)));
            f
        }
    };
    Ok(StructuredSystem::new(Development::new(map)?, SetSystem::new(n, family)?)?)
}

/// `m` nonempty random subsets, patched so that every state is covered.
pub fn random_cover(rng: &mut impl Rng, n: usize, m: usize) -> Vec<Mask> {
    let m = m.max(1);
    let mut family: Vec<Mask> = (0..m)
        .map(|_| {
            let mut s = Mask::from_fn(n, |_| rng.gen_bool(0.4));
            if s.is_empty() {
                s.insert(rng.gen_range(0..n));
            }
            s
        })
        .collect();
    for x in 0..n {
        if !family.iter().any(|s| s.contains(x)) {
            let k = rng.gen_range(0..m);
            family[k].insert(x);
        }
    }
    family
}

pub fn random_partition(rng: &mut impl Rng, n: usize) -> Vec<Mask> {
    let blocks = rng.gen_range(1..=n);
    let label: Vec<usize> = (0..n).map(|x| if x < blocks { x } else { rng.gen_range(0..blocks) }).collect();
    (0..blocks).map(|b| Mask::from_fn(n, |x| label[x] == b)).collect()
}

fn grid_check(n: usize) -> Result<()> {
    if n < 5 {
        return Err(HarnessError::BadParams(format!("grids need N >= 5, got {n}")));
    }
    Ok(())
}

/// Closed balls of radius `2/N` in the circle metric: five consecutive grid points.
pub fn ball_structuring(n: usize) -> (MetricTable, SetSystem) {
    let d = MetricTable::circle(n);
    let r = 2.0 / n as f64;
    let balls = (0..n).map(|x| d.ball(x, r)).collect();
    (d, SetSystem::new(n, balls).expect("balls live on the grid"))
}

/// `x ↦ x + k mod N` on the circle grid with ball structuring.
pub fn grid_rotation(n: usize, k: usize) -> Result<StructuredSystem> {
    grid_check(n)?;
    let (d, sys) = ball_structuring(n);
    let dev = Development::new((0..n).map(|x| (x + k) % n).collect())?;
    Ok(StructuredSystem::new(dev, sys)?.with_metric(d)?)
}

/// `x ↦ 2x mod N` on the circle grid with ball structuring; a bijection exactly when `N` is odd.
pub fn grid_doubling(n: usize) -> Result<StructuredSystem> {
    grid_check(n)?;
    let (d, sys) = ball_structuring(n);
    let dev = Development::new((0..n).map(|x| 2 * x % n).collect())?;
    Ok(StructuredSystem::new(dev, sys)?.with_metric(d)?)
}

/// Two 3-cycles `(0 1 2)(3 4 5)` with `{{1,4},{0,4},{3},{2,5}}`.
pub fn two_cycles_coloc() -> StructuredSystem {
    let sys = SetSystem::from_lists(6, &[&[1, 4], &[0, 4], &[3], &[2, 5]]).expect("fixed lists");
    StructuredSystem::new(Development::new(vec![1, 2, 0, 4, 5, 3]).expect("fixed map"), sys).expect("covers")
}

fn rotation(n: usize, k: usize, lists: &[&[usize]]) -> StructuredSystem {
    let dev = Development::new((0..n).map(|x| (x + k) % n).collect()).expect("rotation");
    StructuredSystem::new(dev, SetSystem::from_lists(n, lists).expect("fixed lists")).expect("covers")
}

/// The curated suite: rotations, block systems and the two-cycle instance, with names.
pub fn curated() -> Vec<(&'static str, StructuredSystem)> {
    let singles4: &[&[usize]] = &[&[0], &[1], &[2], &[3]];
    let blocks4: &[&[usize]] = &[&[0, 1], &[2, 3]];
    let chain4: &[&[usize]] = &[&[0, 1], &[1, 2], &[2, 3]];
    vec![
        ("rot4+1/singletons", rotation(4, 1, singles4)),
        ("rot4+1/blocks", rotation(4, 1, blocks4)),
        ("rot4+2/blocks", rotation(4, 2, blocks4)),
        ("rot4+1/chain", rotation(4, 1, chain4)),
        ("rot6+2/blocks", rotation(6, 2, &[&[0, 1, 2], &[3, 4, 5]])),
        ("rot6+3/pairs", rotation(6, 3, &[&[0, 3], &[1, 4], &[2, 5]])),
        ("identity4/blocks", rotation(4, 0, blocks4)),
        ("two_cycles_coloc", two_cycles_coloc()),
    ]
}
