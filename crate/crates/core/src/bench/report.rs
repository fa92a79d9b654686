use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::fpcore::Fraction;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub p: u64,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub passed: bool,
    /// Soft checks are reported but do not fail a run.
    pub hard: bool,
}

impl CheckRecord {
    pub fn new(
        suite: &str,
        name: &str,
        p: u64,
        lhs: impl Display,
        relation: &str,
        rhs: impl Display,
        passed: bool,
    ) -> Self {
        CheckRecord {
            suite: suite.into(),
            name: name.into(),
            p,
            lhs: lhs.to_string(),
            relation: relation.into(),
            rhs: rhs.to_string(),
            passed,
            hard: true,
        }
    }

    pub fn soft(self) -> Self {
        CheckRecord { hard: false, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub experiment: String,
    pub instance: usize,
    pub p: u64,
    pub values: BTreeMap<String, Value>,
}

impl Measurement {
    pub fn new(experiment: &str, instance: usize, p: u64) -> Self {
        Measurement { experiment: experiment.into(), instance, p, values: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.values.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }
}

/// A measured size set against a catalog threshold `p / t^kappa`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogComparison {
    pub experiment: String,
    pub instance: usize,
    pub p: u64,
    pub entry: String,
    pub kappa: Fraction,
    pub t: u64,
    pub measured: usize,
    pub threshold: f64,
    /// `measured / threshold`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub run: usize,
    pub passed: usize,
    pub failed_hard: usize,
    pub failed_soft: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    /// Seconds since the epoch; the only field allowed to differ between runs.
    pub timestamp: Option<u64>,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub measurements: Vec<Measurement>,
    pub comparisons: Vec<CatalogComparison>,
    pub checks: Vec<CheckRecord>,
    pub tally: Tally,
}

impl ExperimentReport {
    pub(crate) fn assemble(
        config: &ExperimentConfig,
        measurements: Vec<Measurement>,
        comparisons: Vec<CatalogComparison>,
        checks: Vec<CheckRecord>,
    ) -> Self {
        let tally = Tally {
            run: checks.len(),
            passed: checks.iter().filter(|c| c.passed).count(),
            failed_hard: checks.iter().filter(|c| !c.passed && c.hard).count(),
            failed_soft: checks.iter().filter(|c| !c.passed && !c.hard).count(),
        };
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            timestamp,
            seed: config.seed,
            config: config.clone(),
            measurements,
            comparisons,
            checks,
            tally,
        }
    }

    pub fn all_hard_passed(&self) -> bool {
        self.tally.failed_hard == 0
    }

    /// The report with its timestamp removed, for determinism comparisons.
    pub fn payload(&self) -> ExperimentReport {
        ExperimentReport { timestamp: None, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema version {}", report.schema_version)));
        }
        Ok(report)
    }

    /// One row per measurement; columns are `experiment, instance, p` and the
    /// sorted union of measurement keys.
    pub fn measurements_csv(&self) -> Result<String> {
        let keys: BTreeSet<&String> = self.measurements.iter().flat_map(|m| m.values.keys()).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["experiment".to_string(), "instance".into(), "p".into()];
        header.extend(keys.iter().map(|k| k.to_string()));
        w.write_record(&header).map_err(csv_err)?;
        for m in &self.measurements {
            let mut row = vec![m.experiment.clone(), m.instance.to_string(), m.p.to_string()];
            row.extend(keys.iter().map(|k| m.values.get(*k).map(cell).unwrap_or_default()));
            w.write_record(&row).map_err(csv_err)?;
        }
        finish(w)
    }

    pub fn checks_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.checks {
            w.serialize(c).map_err(csv_err)?;
        }
        finish(w)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Flattens a JSON object into a two-row CSV (keys, values); nested values are
/// written as JSON.
pub fn object_csv(value: &Value) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match value {
        Value::Object(map) => {
            w.write_record(map.keys()).map_err(csv_err)?;
            w.write_record(map.values().map(cell)).map_err(csv_err)?;
        }
        other => {
            w.write_record(["value"]).map_err(csv_err)?;
            w.write_record([cell(other)]).map_err(csv_err)?;
        }
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentReport {
        let cfg = ExperimentConfig::default();
        let m = vec![
            Measurement::new("demo", 0, 11).with("size", 3).with("ratio", 0.5),
            Measurement::new("demo", 1, 11).with("label", "x,y"),
        ];
        let checks = vec![
            CheckRecord::new("s", "a", 11, 3, ">=", 2, true),
            CheckRecord::new("s", "b", 11, 1, ">=", 2, false).soft(),
        ];
        ExperimentReport::assemble(&cfg, m, Vec::new(), checks)
    }

    #[test]
    fn json_round_trip_is_fixpoint() {
        let r = sample();
        let text = r.to_json();
        let back = ExperimentReport::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
        assert_eq!(r.tally, Tally { run: 2, passed: 1, failed_hard: 0, failed_soft: 1 });
        assert!(r.all_hard_passed());
    }

    #[test]
    fn csv_layout() {
        let csv = sample().measurements_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("experiment,instance,p,label,ratio,size"));
        assert_eq!(lines.next(), Some("demo,0,11,,0.5,3"));
        assert_eq!(lines.next(), Some("demo,1,11,\"x,y\",,"));
        assert!(sample().checks_csv().unwrap().starts_with("suite,name,p,lhs,relation,rhs,passed,hard"));
    }
}
