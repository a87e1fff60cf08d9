//! Flag parsing, config-file merging and job validation.
//!
//! Config files are flat `key=value` text with exactly the flag names as
//! keys (`L`, `K`, `alpha`, ...). CLI flags override file values; built-in
//! defaults fill the rest.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use impact_lattice::{EngineKind, ModelParams, ScalingKind, UpdateScheme};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "impact-lattice",
    version,
    about = "Multi-opinion social-impact simulator on a square lattice",
    after_help = "Environment: IMPACT_LATTICE_THREADS caps worker count (0 = auto)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one lattice and emit scheduled snapshots
    Run(JobArgs),
    /// Run ensembles over an (alpha, temperature) grid and tabulate
    /// cluster statistics
    Sweep(JobArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct JobArgs {
    /// Lattice linear size
    #[arg(long = "L", value_name = "N")]
    pub l: Option<u32>,
    /// Number of available opinions
    #[arg(long = "K", value_name = "N")]
    pub k: Option<u32>,
    /// Distance scaling exponent
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Social temperature
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    pub temperature: Option<f64>,
    /// Number of evolution steps
    #[arg(long, value_name = "N")]
    pub steps: Option<u32>,
    /// Master seed
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Ensemble size (sweep only)
    #[arg(long, value_name = "N")]
    pub runs: Option<u32>,
    /// Impact engine: naive|kernel
    #[arg(long, value_name = "NAME")]
    pub engine: Option<String>,
    /// Comma-separated snapshot step list (run only)
    #[arg(long, value_name = "STEPS")]
    pub snapshots: Option<String>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Update scheme: sync|async
    #[arg(long, value_name = "NAME")]
    pub update: Option<String>,
    /// Distance scaling form: (1+d)^a|1+d^a
    #[arg(long, value_name = "FORM")]
    pub scaling: Option<String>,
    /// Comma-separated alpha grid (sweep only)
    #[arg(long, value_name = "LIST")]
    pub alphas: Option<String>,
    /// Comma-separated temperature grid (sweep only)
    #[arg(long, value_name = "LIST")]
    pub temperatures: Option<String>,
    /// Flat key=value config file; flags override file keys
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

/// A fully resolved, validated single-run job.
#[derive(Debug, Clone)]
pub struct Job {
    pub params: ModelParams,
    pub engine: EngineKind,
    pub runs: u32,
    pub snapshots: Vec<u32>,
    pub out_dir: PathBuf,
}

/// Sweep grid on top of a base job.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub alphas: Vec<f64>,
    pub temperatures: Vec<f64>,
}

const CONFIG_KEYS: &[&str] = &[
    "L", "K", "alpha", "temperature", "steps", "seed", "runs", "engine", "snapshots", "out",
    "update", "scaling", "alphas", "temperatures",
];

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn parse_num<T: std::str::FromStr>(raw: &str, flag: &str) -> Result<T, CliError> {
    raw.trim()
        .parse()
        .map_err(|_| usage(format!("invalid value for --{flag}: `{raw}` is not a number")))
}

fn parse_list<T: std::str::FromStr>(raw: &str, flag: &str) -> Result<Vec<T>, CliError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|item| parse_num(item, flag))
        .collect()
}

fn parse_engine(raw: &str) -> Result<EngineKind, CliError> {
    match raw.trim() {
        "naive" => Ok(EngineKind::Naive),
        "kernel" => Ok(EngineKind::Kernel),
        other => Err(usage(format!(
            "invalid value for --engine: `{other}` (expected naive|kernel)"
        ))),
    }
}

fn parse_update(raw: &str) -> Result<UpdateScheme, CliError> {
    match raw.trim() {
        "sync" => Ok(UpdateScheme::Synchronous),
        "async" => Ok(UpdateScheme::Asynchronous),
        other => Err(usage(format!(
            "invalid value for --update: `{other}` (expected sync|async)"
        ))),
    }
}

fn parse_scaling(raw: &str) -> Result<ScalingKind, CliError> {
    match raw.trim() {
        "(1+d)^a" => Ok(ScalingKind::PowShifted),
        "1+d^a" => Ok(ScalingKind::ShiftedPow),
        other => Err(usage(format!(
            "invalid value for --scaling: `{other}` (expected (1+d)^a|1+d^a)"
        ))),
    }
}

/// Read a flat key=value config file; `#` starts a comment line.
fn load_config_file(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read --config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(usage(format!(
                "config file {} line {}: expected key=value",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(usage(format!(
                "config file {} line {}: unknown key `{key}`",
                path.display(),
                lineno + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Merge CLI flags over config-file values into unresolved string options.
fn merged(args: &JobArgs) -> Result<JobArgs, CliError> {
    let Some(config_path) = &args.config else {
        return Ok(args.clone());
    };
    let file = load_config_file(config_path)?;
    let mut out = args.clone();
    let get = |key: &str| file.get(key).cloned();
    if out.l.is_none() {
        out.l = get("L").map(|v| parse_num(&v, "L")).transpose()?;
    }
    if out.k.is_none() {
        out.k = get("K").map(|v| parse_num(&v, "K")).transpose()?;
    }
    if out.alpha.is_none() {
        out.alpha = get("alpha").map(|v| parse_num(&v, "alpha")).transpose()?;
    }
    if out.temperature.is_none() {
        out.temperature = get("temperature")
            .map(|v| parse_num(&v, "temperature"))
            .transpose()?;
    }
    if out.steps.is_none() {
        out.steps = get("steps").map(|v| parse_num(&v, "steps")).transpose()?;
    }
    if out.seed.is_none() {
        out.seed = get("seed").map(|v| parse_num(&v, "seed")).transpose()?;
    }
    if out.runs.is_none() {
        out.runs = get("runs").map(|v| parse_num(&v, "runs")).transpose()?;
    }
    if out.engine.is_none() {
        out.engine = get("engine");
    }
    if out.snapshots.is_none() {
        out.snapshots = get("snapshots");
    }
    if out.out.is_none() {
        out.out = get("out").map(PathBuf::from);
    }
    if out.update.is_none() {
        out.update = get("update");
    }
    if out.scaling.is_none() {
        out.scaling = get("scaling");
    }
    if out.alphas.is_none() {
        out.alphas = get("alphas");
    }
    if out.temperatures.is_none() {
        out.temperatures = get("temperatures");
    }
    Ok(out)
}

/// Resolve a `run` invocation into a validated job.
pub fn resolve_run(args: &JobArgs) -> Result<Job, CliError> {
    let args = merged(args)?;
    if args.alphas.is_some() || args.temperatures.is_some() {
        return Err(usage(
            "--alphas/--temperatures apply to `sweep`, not `run`".into(),
        ));
    }
    let job = resolve_base(&args)?;
    if job.runs != 1 {
        return Err(usage(
            "invalid value for --runs: `run` evolves one trajectory; use `sweep` for ensembles"
                .into(),
        ));
    }
    Ok(job)
}

/// Resolve a `sweep` invocation into a validated base job plus grid.
pub fn resolve_sweep(args: &JobArgs) -> Result<(Job, SweepGrid), CliError> {
    let args = merged(args)?;
    let job = resolve_base(&args)?;
    let mut alphas = match &args.alphas {
        Some(raw) => parse_list::<f64>(raw, "alphas")?,
        None => vec![job.params.alpha],
    };
    let mut temperatures = match &args.temperatures {
        Some(raw) => parse_list::<f64>(raw, "temperatures")?,
        None => vec![job.params.temperature],
    };
    if alphas.is_empty() {
        return Err(usage("invalid value for --alphas: grid must be non-empty".into()));
    }
    if temperatures.is_empty() {
        return Err(usage(
            "invalid value for --temperatures: grid must be non-empty".into(),
        ));
    }
    for &a in &alphas {
        if !a.is_finite() || a < 0.0 {
            return Err(usage(
                "invalid value for --alphas: entries must be finite and >= 0".into(),
            ));
        }
    }
    for &t in &temperatures {
        if !t.is_finite() || t < 0.0 {
            return Err(usage(
                "invalid value for --temperatures: entries must be finite and >= 0".into(),
            ));
        }
    }
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    alphas.dedup();
    temperatures.sort_by(|a, b| a.partial_cmp(b).unwrap());
    temperatures.dedup();
    Ok((job, SweepGrid { alphas, temperatures }))
}

fn resolve_base(args: &JobArgs) -> Result<Job, CliError> {
    let steps = args.steps.unwrap_or(100);
    let mut params = ModelParams::new(
        args.l.unwrap_or(41),
        args.k.unwrap_or(2),
        args.alpha.unwrap_or(3.0),
        args.temperature.unwrap_or(1.0),
        steps,
        args.seed.unwrap_or(42),
    );
    if let Some(raw) = &args.update {
        params.update = parse_update(raw)?;
    }
    if let Some(raw) = &args.scaling {
        params.scaling = parse_scaling(raw)?;
    }
    params.validate().map_err(CliError::from)?;

    let engine = match &args.engine {
        Some(raw) => parse_engine(raw)?,
        None => EngineKind::Kernel,
    };
    let snapshots = match &args.snapshots {
        Some(raw) => parse_list::<u32>(raw, "snapshots")?,
        None => vec![steps],
    };
    for &entry in &snapshots {
        if entry > steps {
            return Err(usage(format!(
                "invalid value for --snapshots: step {entry} exceeds --steps {steps}"
            )));
        }
    }
    let runs = args.runs.unwrap_or(1);
    if runs < 1 {
        return Err(usage("invalid value for --runs: must be >= 1".into()));
    }
    Ok(Job {
        params,
        engine,
        runs,
        snapshots,
        out_dir: args.out.clone().unwrap_or_else(|| PathBuf::from("out")),
    })
}
