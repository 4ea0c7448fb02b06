//! The JSON instance format.

use std::path::Path;

use acl_core::{Error, Mask, MetricTable, SetSystem, StructuredSystem};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const FORMAT_VERSION: &str = "1";

/// On-disk shape of an instance. Field order is the canonical emission order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: String,
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
    pub map: Vec<usize>,
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub labels: Vec<String>,
}

/// A validated structured system with its free-form tags.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub system: StructuredSystem,
    pub labels: Vec<String>,
}

impl Instance {
    pub fn new(system: StructuredSystem, labels: Vec<String>) -> Self {
        Instance { system, labels }
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        if file.format_version != FORMAT_VERSION {
            return Err(HarnessError::FormatVersion(file.format_version));
        }
        let n = file.universe;
        let sets = file
            .sets
            .iter()
            .map(|s| Mask::from_indices(n, s.iter().copied()))
            .collect::<std::result::Result<Vec<_>, Error>>()?;
        let sys = SetSystem::new(n, sets)?;
        let metric = file.metric.as_deref().map(MetricTable::from_rows).transpose()?;
        let system = StructuredSystem::build(n, file.map, sys, metric)?;
        Ok(Instance { system, labels: file.labels })
    }

    pub fn to_file(&self) -> InstanceFile {
        let s = &self.system;
        InstanceFile {
            format_version: FORMAT_VERSION.to_string(),
            universe: s.universe(),
            sets: s.sys.sets().iter().map(Mask::to_vec).collect(),
            map: s.dev.table().to_vec(),
            metric: s.metric.as_ref().map(MetricTable::rows),
            labels: self.labels.clone(),
        }
    }

    /// Convenience constructor from plain lists.
    pub fn from_parts(map: Vec<usize>, sets: &[&[usize]], metric: Option<MetricTable>, labels: &[&str]) -> Result<Self> {
        let n = map.len();
        let sys = SetSystem::from_lists(n, sets)?;
        let system = StructuredSystem::build(n, map, sys, metric)?;
        Ok(Instance::new(system, labels.iter().map(|l| l.to_string()).collect()))
    }
}

pub fn parse(bytes: &[u8]) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_slice(bytes).map_err(|e| HarnessError::Parse(e.to_string()))?;
    Instance::from_file(file)
}

/// Canonical JSON: sets sorted and deduplicated, fixed field order, one set or metric row per
/// line, trailing newline.
pub fn emit(inst: &Instance) -> String {
    let f = inst.to_file();
    let rows = |items: Vec<String>| {
        if items.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n    {}\n  ]", items.join(",\n    "))
        }
    };
    let sets = rows(f.sets.iter().map(compact).collect());
    let metric = match &f.metric {
        None => "null".to_string(),
        Some(m) => rows(m.iter().map(compact).collect()),
    };
    format!(
        "{{\n  \"format_version\": {},\n  \"universe\": {},\n  \"sets\": {},\n  \"map\": {},\n  \"metric\": {},\n  \"labels\": {}\n}}\n",
        compact(&f.format_version),
        f.universe,
        sets,
        compact(&f.map),
        metric,
        compact(&f.labels),
    )
}

fn compact<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("instance fields serialize")
}

pub fn load(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| HarnessError::Io { path: path.display().to_string(), source })?;
    parse(&bytes)
}

pub fn save(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, emit(inst)).map_err(|source| HarnessError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_CYCLES: &str = r#"{"format_version":"1","universe":6,"sets":[[1,4],[0,4],[3],[2,5],[3]],
        "map":[1,2,0,4,5,3],"metric":null,"labels":["two_cycles_coloc"]}"#;

    #[test]
    fn duplicates_are_normalized() {
        let inst = parse(TWO_CYCLES.as_bytes()).unwrap();
        assert_eq!(inst.system.sys.len(), 4);
        let again = parse(emit(&inst).as_bytes()).unwrap();
        assert_eq!(again, inst);
        assert_eq!(emit(&again), emit(&inst));
    }

    #[test]
    fn rejects_bad_files() {
        let out_of_range = TWO_CYCLES.replace("[1,2,0,4,5,3]", "[1,2,0,4,5,6]");
        assert!(matches!(
            parse(out_of_range.as_bytes()),
            Err(HarnessError::Core(Error::OutOfRange { index: 6, universe: 6 }))
        ));
        let uncovered = TWO_CYCLES.replace("[2,5],", "[2],");
        assert!(matches!(parse(uncovered.as_bytes()), Err(HarnessError::Core(Error::CoverViolation))));
        let version = TWO_CYCLES.replace("\"1\"", "\"2\"");
        assert!(matches!(parse(version.as_bytes()), Err(HarnessError::FormatVersion(_))));
        assert!(matches!(parse(b"{"), Err(HarnessError::Parse(_))));
    }
}
