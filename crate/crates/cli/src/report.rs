use crate::run::compact;
use anyhow::{Context, Result};
use designlab::experiments::ExperimentReport;
use std::path::{Path, PathBuf};

/// JSON-lines files named by `paths`; directories contribute their `*.jsonl`.
pub fn collect_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = vec![];
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("reading {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "jsonl"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn load(file: &Path) -> Result<Vec<ExperimentReport>> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{}:{}: not a report record", file.display(), i + 1)))
        .collect()
}

pub fn table(reports: &[ExperimentReport]) -> String {
    let rows: Vec<[String; 5]> = reports
        .iter()
        .map(|r| {
            let err = if r.exact { "exact".to_string() } else { format!("{:.3e}", r.stderr) };
            [r.id.clone(), compact(&r.params), format!("{:.6e}", r.estimate), err, r.samples.to_string()]
        })
        .collect();
    let head = ["id", "params", "estimate", "stderr", "samples"];
    let mut width = head.map(|h| h.chars().count());
    for row in &rows {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let fmt = |cells: &[String]| {
        cells
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = fmt(&head.map(String::from));
    out.push('\n');
    out.push_str(&fmt(&width.map(|w| "-".repeat(w))));
    out.push('\n');
    for row in &rows {
        out.push_str(&fmt(row));
        out.push('\n');
    }
    out
}
