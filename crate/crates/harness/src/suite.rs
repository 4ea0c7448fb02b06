//! Theorem suites: each instance is checked against one result of the theory and classified
//! as passed, filtered out, hypothesis-degenerate or violating, with replayable certificates.

use std::fmt;
use std::str::FromStr;

use acl_core::coloc::{equivalence_classes, statewise_sensitive_states};
use acl_core::comanence::{converse_analog, transitivity_analog, AnalogClass};
use acl_core::sensitivity::{fixed_sensitive_at, intrinsic_sensitivity, metric_pointwise_sensitive, resolution_field, s_ord, setwise_sensitivity, SOrd};
use acl_core::{Caps, StructuredSystem, Truth};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analyze::sord_label;
use crate::error::{HarnessError, Result};
use crate::generate::{curated, grid_doubling, grid_rotation, instance_rng, random_system, Cover};
use crate::instance::Instance;
use crate::oracle::Brute;
use crate::report::{mask, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Cantor-continuous flows carry no fixed sensitivity.
    B32,
    /// Set-wise grade-0 sensitivity iff state-wise sensitivity, on deterministic structurings.
    S36,
    /// Order-1 set-wise ⇒ grid-metric ⇒ grade-0 set-wise sensitivity on grids.
    S34,
    /// Transitivity of ultracolocalization.
    S42,
    /// Phase continuity gives converse comanence.
    B41,
    /// Intrinsic sensitivity is invariant under conjugation.
    B22,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::B32, Suite::S36, Suite::S34, Suite::S42, Suite::B41, Suite::B22];

    pub fn name(self) -> &'static str {
        match self {
            Suite::B32 => "B3.2",
            Suite::S36 => "S3.6",
            Suite::S34 => "S3.4",
            Suite::S42 => "S4.2",
            Suite::B41 => "B4.1",
            Suite::B22 => "B2.2",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

/// Verdict on one suite instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    /// Filtered out by the suite's hypotheses.
    Skip,
    /// Hypotheses fail at discrete scale; nothing asserted.
    Degenerate,
    Violation(Value),
    /// Falsification mode: a certified failure of the conclusion once hypotheses are dropped.
    Counterexample(Value),
}

/// Conjugations per instance in the bijection-invariance suite.
pub const CONJUGATIONS: usize = 100;
/// Certificates kept in a report.
pub const MAX_CERTIFICATES: usize = 20;

/// A thread pool sized by `ACL_THREADS` when set.
pub fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = std::env::var("ACL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&k| k > 0) {
        builder = builder.num_threads(k);
    }
    builder.build().expect("thread pool")
}

fn instance_json(s: &StructuredSystem, name: &str) -> Value {
    serde_json::to_value(Instance::new(s.clone(), vec![name.to_string()]).to_file()).expect("instance files serialize")
}

/// Independent check of `a ~ b`, `b ~ c`, `a ≁ c` by simulation.
pub fn certify_triple(s: &StructuredSystem, (a, b, c): (usize, usize, usize)) -> Result<bool> {
    let brute = Brute::new(s)?;
    let related = |x: usize, y: usize| (0..brute.n).any(|w| brute.colocalizes(x, y, w));
    Ok(related(a, b) && related(b, c) && !related(a, c))
}

fn random_bijective(seed: u64, index: usize, lo: usize, hi: usize, cover: Cover) -> Result<StructuredSystem> {
    let mut rng = instance_rng(seed, index as u64);
    let n = rng.gen_range(lo..=hi);
    random_system(&mut rng, n, None, true, cover)
}

fn check_b32(seed: u64, i: usize) -> Result<Outcome> {
    let mut rng = instance_rng(seed, i as u64);
    let n = rng.gen_range(2..=8);
    let bijective = rng.gen_bool(0.5);
    let s = random_system(&mut rng, n, None, bijective, Cover::Random)?;
    if s.is_cantor_continuous_all(&Caps::default())? != Truth::True {
        return Ok(Outcome::Skip);
    }
    for alpha in 0..n {
        let v = fixed_sensitive_at(&s, alpha)?;
        if let Some((x, y)) = &v.pair {
            let certified = Brute::new(&s)?.fixed(alpha).is_some();
            return Ok(Outcome::Violation(json!({
                "instance": instance_json(&s, &format!("B3.2#{i}")),
                "state": alpha,
                "pair": [mask(x), mask(y)],
                "certified": certified,
            })));
        }
    }
    Ok(Outcome::Pass)
}

fn check_s36(seed: u64, i: usize) -> Result<Outcome> {
    let s = random_bijective(seed, i, 2, 8, Cover::WithSingletons)?;
    let poincare = s.is_poincare()?;
    let statewise = !statewise_sensitive_states(&s, false)?.states.is_empty();
    let grade0 = setwise_sensitivity(&s, &Caps::default())?.grade0;
    if grade0 == Truth::Unknown {
        return Ok(Outcome::Skip);
    }
    if !poincare || statewise != grade0.is_true() {
        return Ok(Outcome::Violation(json!({
            "instance": instance_json(&s, &format!("S3.6#{i}")),
            "poincare": poincare,
            "statewise": statewise,
            "grade0": grade0.is_true(),
        })));
    }
    Ok(Outcome::Pass)
}

/// The grid instances of the chain suite, in order.
pub fn grid_instances() -> Vec<(&'static str, fn() -> Result<StructuredSystem>)> {
    vec![
        ("grid_doubling(256)", || grid_doubling(256)),
        ("grid_rotation(256,1)", || grid_rotation(256, 1)),
        ("grid_doubling(255)", || grid_doubling(255)),
        ("grid_rotation(255,2)", || grid_rotation(255, 2)),
        ("grid_doubling(63)", || grid_doubling(63)),
        ("grid_rotation(64,3)", || grid_rotation(64, 3)),
    ]
}

/// The three links of the grid chain: order ≥ 1, metric sensitivity somewhere, grade 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chain {
    pub order_one: bool,
    pub metric: bool,
    pub grade0: bool,
    /// `Δ̂(z) > -∞` somewhere while the commutator vanishes at every time.
    pub field_without_commutator: bool,
}

pub fn grid_chain(s: &StructuredSystem) -> Result<(Chain, SOrd)> {
    let caps = Caps::default();
    let d = s.metric()?;
    let order = s_ord(s, &caps)?.order;
    let order_one = order >= SOrd::Grade(1);
    let two_sided = s.dev.is_bijective();
    let mut metric = false;
    for x in 0..s.universe() {
        metric |= metric_pointwise_sensitive(&s.dev, d, x, two_sided, None)?.sensitive;
    }
    let grade0 = setwise_sensitivity(s, &caps)?.grade0.is_true();
    let field = resolution_field(&s.dev, d, d, None)?;
    let field_without_commutator = field.values.iter().any(|v| *v > f64::NEG_INFINITY) && !grade0;
    Ok((Chain { order_one, metric, grade0, field_without_commutator }, order))
}

fn check_s34(i: usize) -> Result<Outcome> {
    let grids = grid_instances();
    let (name, make) = grids[i % grids.len()];
    let s = make()?;
    let (c, order) = grid_chain(&s)?;
    let chain = (!c.order_one || c.metric) && (!c.metric || c.grade0);
    let rotation_clean = !name.starts_with("grid_rotation") || !(c.order_one || c.metric || c.grade0);
    if chain && rotation_clean && !c.field_without_commutator {
        return Ok(Outcome::Pass);
    }
    Ok(Outcome::Violation(json!({
        "instance": name,
        "order": sord_label(order),
        "order_one": c.order_one,
        "metric": c.metric,
        "grade0": c.grade0,
        "field_without_commutator": c.field_without_commutator,
    })))
}

fn transitivity_certificate(s: &StructuredSystem, name: &str) -> Result<Option<Value>> {
    let classes = equivalence_classes(s)?;
    match classes.violation {
        Some(v) if !classes.is_equivalence => Ok(Some(json!({
            "instance": instance_json(s, name),
            "triple": [v.0, v.1, v.2],
            "certified": certify_triple(s, v)?,
        }))),
        _ => Ok(None),
    }
}

fn check_s42_curated(i: usize) -> Result<Outcome> {
    let (name, s) = curated().swap_remove(i);
    Ok(match transitivity_certificate(&s, name)? {
        Some(cert) => Outcome::Violation(cert),
        None => Outcome::Pass,
    })
}

fn check_s42_random(seed: u64, i: usize, falsify: bool) -> Result<Outcome> {
    let s = random_bijective(seed, i, 3, 7, Cover::Random)?;
    let name = format!("S4.2#{i}");
    if falsify {
        return Ok(match transitivity_certificate(&s, &name)? {
            Some(cert) if cert["certified"] == json!(true) => Outcome::Counterexample(cert),
            Some(cert) => Outcome::Violation(cert),
            None => Outcome::Pass,
        });
    }
    Ok(match transitivity_analog(&s)? {
        AnalogClass::Holds => Outcome::Pass,
        AnalogClass::Degenerate => Outcome::Degenerate,
        AnalogClass::Violation => Outcome::Violation(transitivity_certificate(&s, &name)?.unwrap_or(Value::Null)),
    })
}

fn converse_outcome(s: &StructuredSystem, name: &str) -> Result<Outcome> {
    Ok(match converse_analog(s)? {
        AnalogClass::Holds => Outcome::Pass,
        AnalogClass::Degenerate => Outcome::Degenerate,
        AnalogClass::Violation => Outcome::Violation(json!({"instance": instance_json(s, name)})),
    })
}

fn check_b41(seed: u64, i: usize) -> Result<Outcome> {
    let cur = curated();
    if i < cur.len() {
        return converse_outcome(&cur[i].1, cur[i].0);
    }
    converse_outcome(&random_bijective(seed, i, 2, 7, Cover::Random)?, &format!("B4.1#{i}"))
}

fn check_b22(seed: u64, i: usize) -> Result<Outcome> {
    let mut rng = instance_rng(seed, i as u64);
    let n = rng.gen_range(2..=8);
    let bijective = rng.gen_bool(0.5);
    let s = random_system(&mut rng, n, None, bijective, Cover::Random)?;
    let base: Vec<_> = (0..n).map(|z| intrinsic_sensitivity(&s.dev, z)).collect::<std::result::Result<_, _>>()?;
    for _ in 0..CONJUGATIONS {
        let mut q: Vec<usize> = (0..n).collect();
        q.shuffle(&mut rng);
        let conj = s.dev.conjugate(&q)?;
        for z in 0..n {
            let v = intrinsic_sensitivity(&conj, q[z])?;
            if v.fixed != base[z].fixed || v.unfixed != base[z].unfixed {
                return Ok(Outcome::Violation(json!({
                    "instance": instance_json(&s, &format!("B2.2#{i}")),
                    "conjugation": q,
                    "state": z,
                })));
            }
        }
    }
    Ok(Outcome::Pass)
}

/// Runs a suite over `budget` instances (curated suites cap it at their size). Instances are
/// checked in parallel and merged by index, so the report depends only on the arguments.
pub fn run_suite(suite: Suite, budget: usize, seed: u64, falsify: bool) -> Result<Report> {
    let count = match suite {
        Suite::S34 => budget.min(grid_instances().len()),
        Suite::S42 if !falsify => curated().len() + budget,
        _ => budget,
    };
    let curated_len = curated().len();
    let check = |i: usize| -> Result<Outcome> {
        match suite {
            Suite::B32 => check_b32(seed, i),
            Suite::S36 => check_s36(seed, i),
            Suite::S34 => check_s34(i),
            Suite::S42 if falsify => check_s42_random(seed, i, true),
            Suite::S42 if i < curated_len => check_s42_curated(i),
            Suite::S42 => check_s42_random(seed, i, false),
            Suite::B41 => check_b41(seed, i),
            Suite::B22 => check_b22(seed, i),
        }
    };
    let outcomes: Vec<Outcome> = thread_pool().install(|| (0..count).into_par_iter().map(check).collect::<Result<Vec<_>>>())?;
    let mut r = Report::new(format!("suite:{}", suite.name()), &[]);
    let tally = |pred: fn(&Outcome) -> bool| outcomes.iter().filter(|o| pred(o)).count();
    let violations = tally(|o| matches!(o, Outcome::Violation(_)));
    let counterexamples = tally(|o| matches!(o, Outcome::Counterexample(_)));
    r.verdict("suite", suite.name());
    r.verdict("budget", budget);
    r.verdict("seed", seed);
    r.verdict("falsify", falsify);
    r.verdict("instances", count);
    r.verdict("passed", tally(|o| matches!(o, Outcome::Pass)));
    r.verdict("skipped", tally(|o| matches!(o, Outcome::Skip)));
    r.verdict("degenerate", tally(|o| matches!(o, Outcome::Degenerate)));
    r.verdict("violations", violations);
    r.verdict("counterexamples", counterexamples);
    if suite == Suite::S42 && !falsify {
        r.verdict("curated_violations", outcomes.iter().take(curated_len).filter(|o| matches!(o, Outcome::Violation(_))).count());
    }
    for (i, o) in outcomes.iter().enumerate() {
        if let Outcome::Violation(cert) | Outcome::Counterexample(cert) = o {
            if r.witnesses.len() < MAX_CERTIFICATES {
                r.witnesses.push(json!({"index": i, "kind": if matches!(o, Outcome::Violation(_)) { "violation" } else { "counterexample" }, "certificate": cert}));
            }
        }
    }
    // in falsification mode the goal is a counterexample; finding none means the hypotheses never bit
    r.violations = if falsify { violations + usize::from(counterexamples == 0) } else { violations };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("B9.9".parse::<Suite>(), Err(HarnessError::UnknownSuite(_))));
    }

    #[test]
    fn small_runs_are_deterministic() {
        let a = run_suite(Suite::S36, 20, 3, false).unwrap();
        let b = run_suite(Suite::S36, 20, 3, false).unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert_eq!(a.violations, 0);
    }
}
