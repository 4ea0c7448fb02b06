//! Analysis reports and their JSON and CSV renderings.

use std::collections::{BTreeMap, BTreeSet};

use acl_core::{Mask, PeriodicIntSet, Truth};
use serde::Serialize;
use serde_json::{json, Value};

/// Verdicts, witnesses and per-state rows of one analysis or suite run.
///
/// Maps are ordered, so the JSON rendering is canonical; `timing_ms` is the only
/// schedule-dependent field and is left out of [`Report::canonical_json`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub analysis: String,
    pub labels: Vec<String>,
    pub scale: Option<f64>,
    pub verdicts: BTreeMap<String, Value>,
    pub witnesses: Vec<Value>,
    pub rows: Vec<BTreeMap<String, Value>>,
    /// Verdict keys whose scan hit a cap.
    pub unknown: Vec<String>,
    /// Failed replays, for analyses; failed checks, for suites.
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(analysis: impl Into<String>, labels: &[String]) -> Self {
        Report { analysis: analysis.into(), labels: labels.to_vec(), ..Report::default() }
    }

    pub fn verdict(&mut self, key: &str, value: impl Serialize) {
        self.verdicts.insert(key.to_string(), serde_json::to_value(value).expect("verdicts serialize"));
    }

    /// Records a three-valued verdict, listing it under `unknown` when undecided.
    pub fn truth(&mut self, key: &str, t: Truth) {
        if t == Truth::Unknown {
            self.unknown.push(key.to_string());
        }
        self.verdicts.insert(key.to_string(), truth(t));
    }

    /// Counts a replay; a failed one becomes a violation.
    pub fn replay(&mut self, ok: bool) {
        if !ok {
            self.violations += 1;
        }
    }

    pub fn canonical_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("reports serialize");
        if let Value::Object(map) = &mut value {
            map.remove("timing_ms");
        }
        let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
        out.push('\n');
        out
    }

    /// Per-state rows as a table when present, otherwise the verdicts as key/value pairs.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(["key", "value"]).expect("in-memory write");
            for (k, v) in &self.verdicts {
                w.write_record([k.as_str(), &cell(v)]).expect("in-memory write");
            }
        } else {
            let columns: BTreeSet<&String> = self.rows.iter().flat_map(|r| r.keys()).collect();
            w.write_record(columns.iter().map(|c| c.as_str())).expect("in-memory write");
            for r in &self.rows {
                w.write_record(columns.iter().map(|c| r.get(*c).map(cell).unwrap_or_default())).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// JSON has no infinities; they are written as strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn mask(m: &Mask) -> Value {
    json!(m.to_vec())
}

pub fn truth(t: Truth) -> Value {
    match t {
        Truth::True => json!(true),
        Truth::False => json!(false),
        Truth::Unknown => json!("unknown"),
    }
}

/// A periodic time set as `{start, period, residues, transient}`.
pub fn times(p: &PeriodicIntSet) -> Value {
    json!({
        "start": p.start(),
        "period": p.period(),
        "residues": p.residues().collect::<Vec<_>>(),
        "transient": p.transient_members().collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_drops_timing() {
        let mut r = Report::new("x", &[]);
        r.verdict("b", 1);
        r.verdict("a", num(f64::NEG_INFINITY));
        r.timing_ms = Some(3.5);
        let c = r.canonical_json();
        assert!(!c.contains("timing"));
        assert!(c.find("\"a\"").unwrap() < c.find("\"b\"").unwrap());
        assert!(c.contains("-inf"));
    }

    #[test]
    fn csv_rows() {
        let mut r = Report::new("x", &[]);
        r.rows.push(BTreeMap::from([("state".to_string(), json!(0)), ("set".to_string(), json!([1, 2]))]));
        assert_eq!(r.to_csv(), "set,state\n\"[1,2]\",0\n");
        r.rows.clear();
        r.truth("t", Truth::Unknown);
        assert_eq!(r.to_csv(), "key,value\nt,unknown\n");
        assert_eq!(r.unknown, vec!["t".to_string()]);
    }
}
