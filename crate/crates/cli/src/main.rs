mod config;
mod report;
mod run;
mod verify;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use config::{OutputFormat, RunConfig, Selection, CONFIG_VERSION};
use std::path::PathBuf;
use std::process::ExitCode;

/// Overrides the output directory of `run` when --out is not given.
const OUT_ENV: &str = "DESIGNLAB_OUT";

#[derive(Parser)]
#[command(name = "designlab", version, about = "Run design, twirl and anti-concentration experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the experiments of a run config (or a single experiment).
    Run(RunArgs),
    /// Print the experiment catalog.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Run the fast invariant checks.
    Verify,
    /// Summarize JSON-lines report files (or directories of them) as a table.
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_name = "PATH", conflicts_with = "experiment")]
    config: Option<PathBuf>,
    /// Run one experiment id instead of a config; parameters via --param.
    #[arg(long, value_name = "ID")]
    experiment: Option<String>,
    /// key=value; the value is read as JSON when it parses, else as a string.
    #[arg(long = "param", value_name = "KEY=VALUE", requires = "experiment")]
    params: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long, short)]
    quiet: bool,
}

fn single_experiment_config(id: &str, params: &[String], seed: Option<u64>) -> Result<RunConfig> {
    let Some(seed) = seed else { bail!("--seed is required with --experiment") };
    let mut grid = std::collections::BTreeMap::new();
    for kv in params {
        let Some((k, v)) = kv.split_once('=') else { bail!("parameter {kv:?} is not key=value") };
        let value = match serde_json::from_str::<serde_json::Value>(v) {
            Ok(serde_json::Value::Number(n)) if n.is_u64() => toml::Value::Integer(n.as_u64().unwrap() as i64),
            Ok(serde_json::Value::Number(n)) => toml::Value::Float(n.as_f64().unwrap_or(f64::NAN)),
            Ok(serde_json::Value::Bool(b)) => toml::Value::Boolean(b),
            _ => toml::Value::String(v.to_string()),
        };
        grid.insert(k.to_string(), value);
    }
    let cfg = RunConfig {
        version: CONFIG_VERSION,
        seed: Some(seed),
        workers: None,
        out: None,
        format: None,
        experiments: vec![Selection { id: id.to_string(), grid }],
    };
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_run(a: RunArgs) -> Result<ExitCode> {
    let mut cfg = match (&a.config, &a.experiment) {
        (Some(path), None) => RunConfig::load(path)?,
        (None, Some(id)) => single_experiment_config(id, &a.params, a.seed)?,
        _ => bail!("pass either --config or --experiment"),
    };
    if let Some(s) = a.seed {
        cfg.seed = Some(s);
    }
    let out = a
        .out
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"));
    let workers = a.workers.or(cfg.workers).unwrap_or(1);
    let format = a.format.or(cfg.format).unwrap_or_default();
    let s = run::run(&cfg, &out, workers, format, a.quiet)?;
    eprintln!("{} records, {} failed grid points, written to {}", s.records, s.failures, s.out.display());
    Ok(if s.failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_list(json: bool) -> Result<ExitCode> {
    let entries = designlab::experiments::list_experiments();
    if json {
        println!("{}", serde_json::to_string_pretty(&entries)?);
    } else {
        for e in entries {
            println!("{}\n    params: {}\n    anchor: {}", e.id, e.params.join(", "), e.anchor);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify() -> Result<ExitCode> {
    let outcomes = verify::run_all();
    for o in &outcomes {
        println!("{} {:<22} {}", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    Ok(if outcomes.iter().all(|o| o.pass) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_report(paths: &[PathBuf]) -> Result<ExitCode> {
    let files = report::collect_files(paths)?;
    if files.is_empty() {
        bail!("no JSON-lines files found");
    }
    let mut all = vec![];
    for f in &files {
        all.extend(report::load(f)?);
    }
    print!("{}", report::table(&all));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::List { json } => cmd_list(json),
        Command::Verify => cmd_verify(),
        Command::Report { paths } => cmd_report(&paths),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
