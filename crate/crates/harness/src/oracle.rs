//! Exhaustive ground truth on small universes, written against plain `u64` bit sets and direct
//! simulation so that it shares no code path with the fast routines it checks.

use std::str::FromStr;

use acl_core::{Error, StructuredSystem};
use serde_json::json;

use crate::error::{HarnessError, Result};
use crate::report::Report;

/// Largest universe the oracles accept.
pub const ORACLE_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    Commutator,
    Setwise,
    Fixed,
    Coloc,
}

impl FromStr for Which {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "commutator" => Ok(Which::Commutator),
            "setwise" => Ok(Which::Setwise),
            "fixed" => Ok(Which::Fixed),
            "coloc" => Ok(Which::Coloc),
            other => Err(HarnessError::BadParams(format!("unknown oracle `{other}`"))),
        }
    }
}

/// The plain-data view the oracles work on.
pub struct Brute {
    pub n: usize,
    pub map: Vec<usize>,
    pub sets: Vec<u64>,
    pub bijective: bool,
}

impl Brute {
    pub fn new(s: &StructuredSystem) -> Result<Self> {
        let n = s.universe();
        if n > ORACLE_CAP {
            return Err(Error::CapExceeded { size: n, cap: ORACLE_CAP }.into());
        }
        let sets = s.sys.sets().iter().map(|m| m.iter().fold(0u64, |b, x| b | 1 << x)).collect();
        let map = s.dev.table().to_vec();
        let mut seen = vec![false; n];
        let bijective = map.iter().all(|&y| !std::mem::replace(&mut seen[y], true));
        Ok(Brute { n, map, sets, bijective })
    }

    pub fn full(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// Literal closure: the intersection of all nonempty complements `Y \ S ⊇ Z`.
    pub fn closure(&self, z: u64) -> u64 {
        let full = self.full();
        self.sets.iter().map(|s| full & !s).filter(|&c| c != 0 && z & !c == 0).fold(full, |a, c| a & c)
    }

    /// The map `ξ^t` as a table, by repeated composition.
    pub fn power(&self, t: i64) -> Vec<usize> {
        let step: Vec<usize> = if t >= 0 {
            self.map.clone()
        } else {
            let mut inv = vec![0; self.n];
            for (x, &y) in self.map.iter().enumerate() {
                inv[y] = x;
            }
            inv
        };
        let mut p: Vec<usize> = (0..self.n).collect();
        for _ in 0..t.unsigned_abs() {
            p = p.iter().map(|&x| step[x]).collect();
        }
        p
    }

    pub fn image(&self, p: &[usize], x: u64) -> u64 {
        (0..self.n).filter(|&i| x >> i & 1 == 1).fold(0, |b, i| b | 1 << p[i])
    }

    /// Times `1..=m` after which the powers repeat: `ξ^{m+1}` equals an earlier power.
    pub fn times(&self) -> Vec<i64> {
        let mut seen: Vec<Vec<usize>> = vec![(0..self.n).collect()];
        loop {
            let next: Vec<usize> = seen.last().expect("nonempty").iter().map(|&x| self.map[x]).collect();
            if seen.contains(&next) {
                return (1..seen.len() as i64).collect();
            }
            seen.push(next);
        }
    }

    /// Start and length of a window of times on which every pair of orbits is recurrent.
    pub fn recurrent_window(&self) -> (usize, usize) {
        let w = self.n;
        let base = self.power(w as i64);
        let mut p = base.clone();
        for len in 1.. {
            p = p.iter().map(|&x| self.map[x]).collect();
            if p == base {
                return (w, len);
            }
        }
        unreachable!()
    }

    /// First `X` with a nonempty commutator at time `t`, with the commutator.
    pub fn commutator(&self, t: i64) -> Option<(u64, u64)> {
        let p = self.power(t);
        (0..=self.full()).find_map(|x| {
            let c = self.closure(self.image(&p, x)) ^ self.image(&p, self.closure(x));
            (c != 0).then_some((x, c))
        })
    }

    /// Fixed sensitivity at `alpha`: the first disjoint pair every localization of `alpha`
    /// splits into at recurrent times.
    pub fn fixed(&self, alpha: usize) -> Option<(u64, u64)> {
        let (w, len) = self.recurrent_window();
        let traj: Vec<Vec<usize>> = (0..self.n).map(|x| (0..w + len).map(|t| self.power(t as i64)[x]).collect()).collect();
        let locs: Vec<u64> = self.sets.iter().copied().filter(|&s| s != 0).collect();
        for &xs in &locs {
            for &ys in &locs {
                if xs & ys != 0 {
                    continue;
                }
                let splits = |a: u64| {
                    (0..self.n).filter(|&x| a >> x & 1 == 1).any(|x| {
                        (0..self.n).filter(|&y| a >> y & 1 == 1).any(|y| {
                            (w..w + len).any(|t| xs >> traj[x][t] & 1 == 1 && ys >> traj[y][t] & 1 == 1)
                        })
                    })
                };
                if locs.iter().filter(|&&a| a >> alpha & 1 == 1).all(|&a| splits(a)) {
                    return Some((xs, ys));
                }
            }
        }
        None
    }

    /// Whether `z, y` both sit in every localization of `omega` at a common recurrent time.
    pub fn colocalizes(&self, z: usize, y: usize, omega: usize) -> bool {
        let (w, len) = self.recurrent_window();
        let ps: Vec<Vec<usize>> = (w..w + len).map(|t| self.power(t as i64)).collect();
        self.sets
            .iter()
            .filter(|&&u| u >> omega & 1 == 1)
            .all(|&u| ps.iter().any(|p| u >> p[z] & 1 == 1 && u >> p[y] & 1 == 1))
    }

    pub fn separated(&self, z: usize, y: usize) -> bool {
        let has = |a: usize, b: usize| self.sets.iter().any(|&s| s >> a & 1 == 1 && s >> b & 1 == 0);
        has(z, y) && has(y, z)
    }
}

fn bits(x: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| x >> i & 1 == 1).collect()
}

/// Exhaustive verdicts for one analysis.
pub fn brute_oracle(s: &StructuredSystem, which: Which, labels: &[String]) -> Result<Report> {
    let b = Brute::new(s)?;
    let n = b.n;
    let mut r = Report::new(format!("oracle:{}", name(which)), labels);
    match which {
        Which::Commutator | Which::Setwise => {
            let mut any = false;
            for t in b.times() {
                let hit = b.commutator(t);
                any |= hit.is_some();
                r.rows.push(
                    [
                        ("t".to_string(), json!(t)),
                        ("nonempty".to_string(), json!(hit.is_some())),
                        ("set".to_string(), hit.map_or(json!(null), |h| json!(bits(h.0, n)))),
                        ("commutator".to_string(), hit.map_or(json!(null), |h| json!(bits(h.1, n)))),
                    ]
                    .into(),
                );
            }
            r.verdict(if which == Which::Commutator { "nonempty_somewhere" } else { "grade0" }, any);
        }
        Which::Fixed => {
            let mut states = Vec::new();
            for alpha in 0..n {
                let pair = b.fixed(alpha);
                if pair.is_some() {
                    states.push(alpha);
                }
                r.rows.push(
                    [
                        ("state".to_string(), json!(alpha)),
                        ("fixed".to_string(), json!(pair.is_some())),
                        ("pair".to_string(), pair.map_or(json!(null), |(x, y)| json!([bits(x, n), bits(y, n)]))),
                    ]
                    .into(),
                );
            }
            r.verdict("fixed_states", states);
        }
        Which::Coloc => {
            if !b.bijective {
                return Err(Error::NegativeTimeUnsupported.into());
            }
            let (mut coloc, mut coloc0, mut plus) = (Vec::new(), Vec::new(), Vec::new());
            for omega in 0..n {
                let pairs: Vec<(usize, usize)> =
                    (0..n).flat_map(|z| (0..n).map(move |y| (z, y))).filter(|&(z, y)| b.colocalizes(z, y, omega)).collect();
                if !pairs.is_empty() {
                    coloc.push(omega);
                }
                if pairs.iter().any(|&(z, y)| z != y) {
                    coloc0.push(omega);
                }
                if pairs.iter().any(|&(z, y)| z != y && b.separated(z, y)) {
                    plus.push(omega);
                }
            }
            r.verdict("coloc", coloc);
            r.verdict("coloc0", coloc0);
            r.verdict("coloc_plus", plus);
        }
    }
    Ok(r)
}

pub fn name(which: Which) -> &'static str {
    match which {
        Which::Commutator => "commutator",
        Which::Setwise => "setwise",
        Which::Fixed => "fixed",
        Which::Coloc => "coloc",
    }
}
