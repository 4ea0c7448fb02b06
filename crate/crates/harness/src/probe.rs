//! Empirical probe of the maximal-sensitivity conjecture: on each hull, is the resolution
//! field constant, and does it match the hull's diameter? A probe, never an assertion.

use acl_core::sensitivity::resolution_field;
use acl_core::Mask;
use serde_json::json;

use crate::error::Result;
use crate::instance::Instance;
use crate::report::{mask, num, Report};

/// Hulls are the Vorzimmer of a bijection, or the closures of the cycles of a forward-only map.
pub fn max_sensitivity_probe(inst: &Instance, scale: Option<f64>) -> Result<Report> {
    let s = &inst.system;
    let d = s.metric()?;
    let field = resolution_field(&s.dev, d, d, scale)?;
    let h = field.scale;
    let hulls: Vec<Mask> = if s.dev.is_bijective() {
        s.vorzimmer()?.hulls
    } else {
        let mut v: Vec<Mask> = s
            .dev
            .cycles()
            .iter()
            .map(|c| s.sys.closure(&Mask::from_indices(s.universe(), c.iter().copied()).expect("cycle states are in range")))
            .collect();
        v.sort();
        v.dedup();
        v
    };
    let mut r = Report::new("probe", &inst.labels);
    r.scale = Some(h);
    r.verdict("kind", "conjecture probe");
    let mut applicable = false;
    for hull in &hulls {
        let vals: Vec<f64> = hull.iter().map(|x| field.values[x]).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let diam = d.set_diameter(hull);
        let finite = lo > f64::NEG_INFINITY;
        applicable |= finite;
        r.witnesses.push(json!({
            "hull": mask(hull),
            "min": num(lo),
            "max": num(hi),
            "diameter": num(diam),
            "inapplicable": !finite,
            "constant_at_scale": finite && hi - lo <= h,
            "equals_diameter_at_scale": finite && vals.iter().all(|v| (v - diam).abs() <= 2.0 * h),
        }));
    }
    r.verdict("hulls", hulls.len());
    r.verdict("applicable", applicable);
    Ok(r)
}
