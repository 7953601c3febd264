use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

pub type Params = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub params: Params,
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub exact: bool,
    pub seed: u64,
    pub wall_time_s: f64,
    #[serde(default)]
    pub extras: BTreeMap<String, f64>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn exact(id: &str, params: Params, value: f64, seed: u64) -> Self {
        ExperimentReport {
            id: id.into(),
            params,
            estimate: value,
            stderr: 0.0,
            samples: 1,
            exact: true,
            seed,
            wall_time_s: 0.0,
            extras: BTreeMap::new(),
            notes: vec![],
        }
    }

    pub fn sampled(id: &str, params: Params, est: &super::montecarlo::Estimate, seed: u64) -> Self {
        ExperimentReport {
            id: id.into(),
            params,
            estimate: est.mean,
            stderr: est.stderr,
            samples: est.samples,
            exact: est.stderr == 0.0,
            seed,
            wall_time_s: 0.0,
            extras: BTreeMap::new(),
            notes: vec![],
        }
    }

    pub fn with_extra(mut self, key: &str, v: f64) -> Self {
        self.extras.insert(key.into(), v);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// |estimate − target| in units of stderr (∞ when an exact value misses).
    pub fn sigma_distance(&self, target: f64) -> f64 {
        let d = (self.estimate - target).abs();
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d <= 1e-10 * target.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// JSON of every field except the wall time, for determinism checks.
    pub fn payload(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().unwrap().remove("wall_time_s");
        v.to_string()
    }

    pub const CSV_HEADER: &'static str = "id,params,estimate,stderr,samples,exact,seed,wall_time_s";

    pub fn to_csv_row(&self) -> String {
        let params = serde_json::to_string(&self.params).unwrap().replace('"', "\"\"");
        format!(
            "{},\"{}\",{:e},{:e},{},{},{},{:.6}",
            self.id, params, self.estimate, self.stderr, self.samples, self.exact, self.seed, self.wall_time_s
        )
    }
}
