//! One report per analysis, with every claimed witness replayed through the core.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use acl_core::coloc::{coloc_sets, dissociation_report, equivalence_classes, statewise_sensitive_states, ultimate_sensitivity};
use acl_core::comanence::{
    converse_analog, converse_defects, conversely_comanent, internally_comanent, transitivity_analog, Gaussian, HausdorffTime,
};
use acl_core::sensitivity::{
    fixed_sensitive_at, intrinsic_sensitivity, is_comanent, metric_pointwise_sensitive, protosensitive, quantified_field,
    resolution_field, s_ord, setwise_sensitivity, PairDistance, ProtoKind, SOrd,
};
use acl_core::{Caps, Error, Mask, StructuredSystem, Truth};
use serde_json::{json, Value};

use crate::error::{HarnessError, Result};
use crate::instance::Instance;
use crate::probe::max_sensitivity_probe;
use crate::report::{mask, num, times, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Analysis {
    Closure,
    Commutator,
    Cantor,
    Setwise,
    Sord,
    Fixed,
    Quantified,
    Intrinsic,
    Coloc,
    Statewise,
    Comanence,
    Converse,
    Probe,
}

impl Analysis {
    pub const ALL: [Analysis; 13] = [
        Analysis::Closure,
        Analysis::Commutator,
        Analysis::Cantor,
        Analysis::Setwise,
        Analysis::Sord,
        Analysis::Fixed,
        Analysis::Quantified,
        Analysis::Intrinsic,
        Analysis::Coloc,
        Analysis::Statewise,
        Analysis::Comanence,
        Analysis::Converse,
        Analysis::Probe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Closure => "closure",
            Analysis::Commutator => "commutator",
            Analysis::Cantor => "cantor",
            Analysis::Setwise => "setwise",
            Analysis::Sord => "sord",
            Analysis::Fixed => "fixed",
            Analysis::Quantified => "quantified",
            Analysis::Intrinsic => "intrinsic",
            Analysis::Coloc => "coloc",
            Analysis::Statewise => "statewise",
            Analysis::Comanence => "comanence",
            Analysis::Converse => "converse",
            Analysis::Probe => "probe",
        }
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Analysis {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Analysis::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| HarnessError::UnknownAnalysis(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Options {
    pub caps: Caps,
    /// Grid scale `h`; the metric resolution when absent.
    pub scale: Option<f64>,
}

/// Cap on covers explored per dilated-neighbourhood enumeration.
const COVER_CAP: usize = 200_000;

pub fn sord_label(o: SOrd) -> String {
    match o {
        SOrd::Insensitive => "insensitive".to_string(),
        SOrd::Grade(k) => k.to_string(),
        SOrd::AtLeast(k) => format!(">={k}"),
    }
}

fn row(pairs: Vec<(&str, Value)>) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Replays a commutator witness: `[cl, ξ^t](X)` is the claimed nonempty set.
fn commutator_replays(s: &StructuredSystem, t: i64, x: &Mask, c: &Mask) -> bool {
    !c.is_empty() && s.commutator_apply(t, x).is_ok_and(|got| &got == c)
}

pub fn analyze(inst: &Instance, analysis: Analysis, opts: &Options) -> Result<Report> {
    let s = &inst.system;
    let n = s.universe();
    let caps = &opts.caps;
    let mut r = Report::new(analysis.name(), &inst.labels);
    match analysis {
        Analysis::Closure => {
            for z in 0..n {
                let cl = s.sys.closure(&Mask::singleton(n, z));
                r.replay(s.sys.closure(&cl) == cl && cl.contains(z));
                r.rows.push(row(vec![("state", json!(z)), ("closure", mask(&cl)), ("halo", mask(&s.sys.halo(z)))]));
            }
            match s.sys.closed_sets(caps.brute_force) {
                Ok(closed) => {
                    for c in &closed {
                        r.replay(s.sys.is_closed(c));
                    }
                    r.verdict("closed_sets", closed.iter().map(mask).collect::<Vec<_>>());
                }
                Err(Error::CapExceeded { .. }) => r.unknown.push("closed_sets".to_string()),
                Err(e) => return Err(e.into()),
            }
            r.verdict("is_topology", s.sys.is_topology());
            r.verdict("deterministic", s.sys.is_deterministic());
            r.verdict("hausdorff_separation", s.sys.has_hausdorff_separation());
        }
        Analysis::Commutator | Analysis::Setwise => {
            let rep = setwise_sensitivity(s, caps)?;
            for w in &rep.witnesses {
                r.replay(commutator_replays(s, w.t, &w.sensitive_set, &w.commutator));
                let mut v = json!({"t": w.t, "set": mask(&w.sensitive_set), "commutator": mask(&w.commutator)});
                if let Some(l) = &w.localization {
                    v["localization"] = mask(&l.localization);
                    v["q"] = json!(l.q);
                    v["image"] = mask(&l.image);
                    v["image_unhaltig"] = json!(l.image_unhaltig);
                }
                r.witnesses.push(v);
            }
            if analysis == Analysis::Commutator {
                let commutes = match rep.grade0 {
                    Truth::True => Truth::False,
                    Truth::False => Truth::True,
                    Truth::Unknown => Truth::Unknown,
                };
                r.truth("commutes", commutes);
            } else {
                r.truth("grade0", rep.grade0);
                r.truth("unbounded", rep.unbounded);
            }
        }
        Analysis::Cantor => {
            let (ts, _) = s.time_scan(caps);
            for t in ts {
                r.rows.push(row(vec![("t", json!(t)), ("continuous", json!(s.is_cantor_continuous(t)?))]));
            }
            r.truth("continuous_all", s.is_cantor_continuous_all(caps)?);
        }
        Analysis::Sord => {
            let rep = s_ord(s, caps)?;
            r.verdict("order", sord_label(rep.order));
            if !rep.complete {
                r.unknown.push("order".to_string());
            }
            if let Some((t, q, loc)) = &rep.witness {
                r.replay(s.sys.is_unhaltig(&s.dev.act(loc, *q as i64 * t)));
                r.witnesses.push(json!({"t": t, "q": q, "localization": mask(loc)}));
            }
        }
        Analysis::Fixed => {
            let mut states = Vec::new();
            for alpha in 0..n {
                let v = fixed_sensitive_at(s, alpha)?;
                let p1 = protosensitive(s, alpha, ProtoKind::First)?;
                let p2 = protosensitive(s, alpha, ProtoKind::Second)?;
                if let Some((x, y)) = &v.pair {
                    states.push(alpha);
                    for (_, a, b, t) in &v.witnesses {
                        r.replay(x.contains(s.dev.evolve(*a, *t)?) && y.contains(s.dev.evolve(*b, *t)?) && !x.intersects(y));
                    }
                }
                r.rows.push(row(vec![
                    ("state", json!(alpha)),
                    ("fixed", json!(v.sensitive)),
                    ("proto1", json!(p1)),
                    ("proto2", json!(p2)),
                    ("pair", v.pair.as_ref().map_or(json!(null), |(x, y)| json!([mask(x), mask(y)]))),
                ]));
            }
            r.verdict("fixed_states", states);
        }
        Analysis::Quantified => {
            let d = s.metric()?;
            for (alpha, v) in quantified_field(s, PairDistance::Hausdorff)?.into_iter().enumerate() {
                for (_, _, _, _, x, y) in &v.witnesses {
                    r.replay(!x.intersects(y));
                }
                r.rows.push(row(vec![
                    ("state", json!(alpha)),
                    ("sensitive", json!(v.sensitive)),
                    ("delta", v.delta.map_or(json!(null), num)),
                ]));
            }
            r.scale = d.resolution();
        }
        Analysis::Intrinsic => {
            for z in 0..n {
                let v = intrinsic_sensitivity(&s.dev, z)?;
                if let Some((t, fibre)) = &v.witness {
                    r.replay(fibre.contains(*t));
                }
                r.rows.push(row(vec![
                    ("state", json!(z)),
                    ("fixed", json!(v.fixed)),
                    ("unfixed", json!(v.unfixed)),
                    ("fibre", v.witness.as_ref().map_or(json!(null), |(t, f)| json!({"t": t, "times": times(f)}))),
                ]));
            }
        }
        Analysis::Coloc => {
            let c = coloc_sets(s)?;
            for v in &c.verdicts {
                r.replay(v.replays(&s.dev));
                r.witnesses.push(json!({
                    "omega": v.omega,
                    "pair": [v.pair.0, v.pair.1],
                    "period": v.period,
                    "residues": v.residues.iter().map(|(u, t)| json!([mask(u), t])).collect::<Vec<_>>(),
                }));
            }
            r.verdict("coloc", mask(&c.coloc));
            r.verdict("coloc0", mask(&c.coloc0));
            r.verdict("coloc_plus", mask(&c.coloc_plus));
            r.verdict(
                "separators",
                c.separators.iter().map(|(w, a, b)| json!({"omega": w, "l_z": mask(a), "l_y": mask(b)})).collect::<Vec<_>>(),
            );
            let classes = equivalence_classes(s)?;
            r.verdict("classes", classes.classes.iter().map(mask).collect::<Vec<_>>());
            r.verdict("reflexivity_domain", mask(&classes.reflexivity_domain));
            r.verdict("is_equivalence", classes.is_equivalence);
            r.verdict("transitivity_violation", classes.violation);
            r.verdict("dissociation", format!("{:?}", dissociation_report(s)?));
            r.verdict("ultimate", ultimate_sensitivity(s)?);
        }
        Analysis::Statewise => {
            for (key, separated) in [("coloc_minus", false), ("coloc_minus_separated", true)] {
                let rep = statewise_sensitive_states(s, separated)?;
                r.verdict(key, mask(&rep.states));
                for w in &rep.witnesses {
                    r.replay(w.pairs.iter().all(|(l, z, y)| l.contains(*z) && l.contains(*y) && l.contains(w.omega)));
                    r.witnesses.push(json!({
                        "variant": key,
                        "omega": w.omega,
                        "pairs": w.pairs.iter().map(|(l, z, y)| json!([mask(l), z, y])).collect::<Vec<_>>(),
                        "uniform": w.uniform.as_ref().map(|(t, l)| json!([t, mask(l)])),
                    }));
                }
            }
            r.truth("grade0", setwise_sensitivity(s, caps)?.grade0);
        }
        Analysis::Comanence => {
            let d = s.metric()?;
            let field = resolution_field(&s.dev, d, d, opts.scale)?;
            r.scale = Some(field.scale);
            let two_sided = s.dev.is_bijective();
            for x in 0..n {
                let p = metric_pointwise_sensitive(&s.dev, d, x, two_sided, opts.scale)?;
                if let Some((y, t)) = p.witness {
                    let sep = d.d(s.dev.evolve(x, t)?, s.dev.evolve(y, t)?);
                    r.replay(Some(sep) == p.epsilon && d.d(x, y) <= field.scale);
                }
                r.rows.push(row(vec![
                    ("state", json!(x)),
                    ("delta_hat", num(field.values[x])),
                    ("sensitive", json!(p.sensitive)),
                    ("epsilon", p.epsilon.map_or(json!(null), num)),
                ]));
            }
            r.verdict("comanent", is_comanent(&s.dev, d, d));
            match internally_comanent(s, COVER_CAP) {
                Ok(b) => r.verdict("internally_comanent", b),
                Err(Error::CapExceeded { .. }) => {
                    r.verdict("internally_comanent", "unknown");
                    r.unknown.push("internally_comanent".to_string());
                }
                Err(e) => return Err(e.into()),
            }
        }
        Analysis::Converse => {
            r.verdict("conversely_comanent_g", conversely_comanent(s, &Gaussian::default())?);
            r.verdict("conversely_comanent_hausdorff", conversely_comanent(s, &HausdorffTime)?);
            r.verdict("converse_analog", format!("{:?}", converse_analog(s)?));
            r.verdict("transitivity_analog", format!("{:?}", transitivity_analog(s)?));
            for (x, y, a) in converse_defects(s, &Gaussian::default())? {
                r.replay(s.dev.time_preimage(x, &a) != s.dev.time_preimage(y, &a));
                r.witnesses.push(json!({
                    "pair": [x, y],
                    "localization": mask(&a),
                    "returns_x": times(&s.dev.time_preimage(x, &a)),
                    "returns_y": times(&s.dev.time_preimage(y, &a)),
                }));
            }
        }
        Analysis::Probe => return max_sensitivity_probe(inst, opts.scale),
    }
    Ok(r)
}
