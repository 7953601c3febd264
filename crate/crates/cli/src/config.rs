use anyhow::{bail, Context, Result};
use designlab::experiments::{list_experiments, Params};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Both,
}

impl OutputFormat {
    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
}

/// One experiment family: its id and a grid of parameter values. Array values
/// are swept (cartesian product); scalars are held fixed.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Selection {
    pub id: String,
    #[serde(default)]
    pub grid: BTreeMap<String, toml::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub seed: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
    #[serde(default)]
    pub experiments: Vec<Selection>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).context("parsing run config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            bail!("unsupported config version {} (expected {CONFIG_VERSION})", self.version);
        }
        if self.seed.is_none() {
            bail!("config must set a seed");
        }
        if self.experiments.is_empty() {
            bail!("config selects no experiments");
        }
        let known: Vec<&str> = list_experiments().iter().map(|e| e.id).collect();
        for s in &self.experiments {
            if !known.contains(&s.id.as_str()) {
                bail!("unknown experiment id {:?}", s.id);
            }
            for (k, v) in &s.grid {
                if let toml::Value::Array(a) = v {
                    if a.is_empty() {
                        bail!("{}: grid for {k} is empty", s.id);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.expect("validated")
    }

    /// sha256 over the canonical JSON of the fields that determine results:
    /// version, seed and the experiment grids (not workers, paths or formats).
    pub fn hash(&self) -> String {
        let semantic = serde_json::json!({
            "version": self.version,
            "seed": self.seed,
            "experiments": self.experiments.iter().map(|s| serde_json::json!({
                "id": s.id,
                "grid": s.grid.iter().map(|(k, v)| (k.clone(), to_json(v))).collect::<BTreeMap<_, _>>(),
            })).collect::<Vec<_>>(),
        });
        let digest = Sha256::digest(serde_json::to_string(&semantic).expect("json").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn to_json(v: &toml::Value) -> Value {
    match v {
        toml::Value::String(s) => Value::String(s.clone()),
        toml::Value::Integer(i) => Value::from(*i),
        toml::Value::Float(f) => Value::from(*f),
        toml::Value::Boolean(b) => Value::Bool(*b),
        toml::Value::Datetime(d) => Value::String(d.to_string()),
        toml::Value::Array(a) => Value::Array(a.iter().map(to_json).collect()),
        toml::Value::Table(t) => Value::Object(t.iter().map(|(k, v)| (k.clone(), to_json(v))).collect()),
    }
}

/// All grid points of a selection, in lexicographic key order with the last
/// key varying fastest.
pub fn expand(sel: &Selection) -> Vec<Params> {
    let mut points = vec![Params::new()];
    for (k, v) in &sel.grid {
        let values: Vec<Value> = match v {
            toml::Value::Array(a) => a.iter().map(to_json).collect(),
            other => vec![to_json(other)],
        };
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |val| {
                    let mut q = p.clone();
                    q.insert(k.clone(), val.clone());
                    q
                })
            })
            .collect();
    }
    points
}
