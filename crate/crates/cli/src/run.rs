use crate::config::{expand, OutputFormat, RunConfig};
use anyhow::{Context, Result};
use designlab::experiments::{run_experiment, ExperimentReport, RunOptions};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Serialize)]
struct ManifestRecord {
    id: String,
    file: String,
    line: usize,
    params: designlab::experiments::Params,
}

#[derive(Serialize)]
struct ManifestFailure {
    id: String,
    params: designlab::experiments::Params,
    error: String,
}

#[derive(Serialize)]
struct Manifest {
    version: u32,
    seed: u64,
    config_hash: String,
    tool_version: &'static str,
    records: Vec<ManifestRecord>,
    failures: Vec<ManifestFailure>,
}

/// Output files of one experiment family. All writes go through here.
struct Sink {
    jsonl: Option<(String, BufWriter<File>, usize)>,
    csv: Option<(String, BufWriter<File>, usize)>,
}

impl Sink {
    fn open(dir: &Path, id: &str, format: OutputFormat) -> Result<Self> {
        let jsonl = if format.json() {
            let name = format!("{id}.jsonl");
            let f = File::create(dir.join(&name)).with_context(|| format!("creating {name}"))?;
            Some((name, BufWriter::new(f), 0))
        } else {
            None
        };
        let csv = if format.csv() {
            let name = format!("{id}.csv");
            let mut w = BufWriter::new(File::create(dir.join(&name)).with_context(|| format!("creating {name}"))?);
            writeln!(w, "{}", ExperimentReport::CSV_HEADER)?;
            Some((name, w, 1))
        } else {
            None
        };
        Ok(Sink { jsonl, csv })
    }

    /// Writes one report; returns (file, 1-based line) of the record, preferring
    /// the JSON-lines copy.
    fn write(&mut self, r: &ExperimentReport) -> Result<(String, usize)> {
        let mut at = None;
        if let Some((name, w, line)) = &mut self.csv {
            writeln!(w, "{}", r.to_csv_row())?;
            *line += 1;
            at = Some((name.clone(), *line));
        }
        if let Some((name, w, line)) = &mut self.jsonl {
            writeln!(w, "{}", r.to_json_line())?;
            *line += 1;
            at = Some((name.clone(), *line));
        }
        Ok(at.expect("at least one output format"))
    }

    fn finish(self) -> Result<()> {
        if let Some((_, mut w, _)) = self.jsonl {
            w.flush()?;
        }
        if let Some((_, mut w, _)) = self.csv {
            w.flush()?;
        }
        Ok(())
    }
}

pub struct RunSummary {
    pub records: usize,
    pub failures: usize,
    pub out: PathBuf,
}

pub fn run(cfg: &RunConfig, out: &Path, workers: usize, format: OutputFormat, quiet: bool) -> Result<RunSummary> {
    std::fs::create_dir_all(out).with_context(|| format!("creating output directory {}", out.display()))?;
    let opts = RunOptions { seed: cfg.seed(), workers: workers.max(1) };
    let mut manifest = Manifest {
        version: cfg.version,
        seed: cfg.seed(),
        config_hash: cfg.hash(),
        tool_version: env!("CARGO_PKG_VERSION"),
        records: vec![],
        failures: vec![],
    };
    // selections sharing an id append to the same family file
    let mut sinks: BTreeMap<String, Sink> = BTreeMap::new();
    for sel in &cfg.experiments {
        if !sinks.contains_key(&sel.id) {
            sinks.insert(sel.id.clone(), Sink::open(out, &sel.id, format)?);
        }
        let sink = sinks.get_mut(&sel.id).expect("opened");
        for point in expand(sel) {
            match run_experiment(&sel.id, &point, &opts) {
                Ok(reports) => {
                    for r in reports {
                        if !quiet {
                            eprintln!("{:<32} {:>14.6e} ± {:.2e}  {}", r.id, r.estimate, r.stderr, compact(&r.params));
                        }
                        let (file, line) = sink.write(&r)?;
                        manifest.records.push(ManifestRecord { id: r.id.clone(), file, line, params: r.params.clone() });
                    }
                }
                Err(e) => {
                    eprintln!("error: {} {}: {e}", sel.id, compact(&point));
                    manifest.failures.push(ManifestFailure { id: sel.id.clone(), params: point, error: e.to_string() });
                }
            }
        }
    }
    for (_, s) in sinks {
        s.finish()?;
    }
    let summary = RunSummary { records: manifest.records.len(), failures: manifest.failures.len(), out: out.to_path_buf() };
    let text = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(out.join("manifest.json"), text + "\n")?;
    Ok(summary)
}

pub fn compact(p: &designlab::experiments::Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={}", v.to_string().trim_matches('"'))).collect::<Vec<_>>().join(" ")
}
