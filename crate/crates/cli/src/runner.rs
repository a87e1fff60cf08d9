//! Parallel execution and artifact orchestration.
//!
//! Parallelism never changes results: synchronous steps split the agent
//! range across workers (each agent draws from its own counter stream), and
//! ensembles reduce per-run observables in run-index order.

use std::path::Path;

use impact_lattice::{
    aggregate, measure_run, next_opinions_range, step, sustain_probability_field, with_opinions,
    Configuration, Engine, EngineKind, EnsembleStats, ModelError, ModelParams, RunResult,
    Snapshot, SustainField, UpdateScheme,
};
use rayon::prelude::*;

use crate::args::{Job, SweepGrid};
use crate::emit;
use crate::error::CliError;
use crate::manifest::{Manifest, SweepDoc};

/// Environment variable capping the worker count (0 or unset = auto).
pub const THREADS_ENV: &str = "IMPACT_LATTICE_THREADS";

/// Build the global thread pool from `IMPACT_LATTICE_THREADS`.
///
/// Returns the applied cap (0 means automatic). Safe to call once per
/// process; later calls are ignored by rayon, which is fine for tests.
pub fn install_thread_pool() -> Result<usize, CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Err(_) => 0,
        Ok(raw) => raw.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!(
                "invalid value for {THREADS_ENV}: `{raw}` is not a thread count"
            ))
        })?,
    };
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(threads)
}

/// One synchronous step with the agent range split across workers;
/// bit-identical to the serial step by construction. Asynchronous updates
/// are inherently sequential and fall back to the serial path.
pub fn parallel_step(config: &Configuration, engine: &Engine) -> Result<Configuration, ModelError> {
    if config.params.update == UpdateScheme::Asynchronous {
        return step(config, engine);
    }
    let n = config.agent_count();
    let chunk = config.side().max(1);
    let mut opinions = vec![0u32; n];
    opinions
        .par_chunks_mut(chunk)
        .enumerate()
        .for_each(|(index, out)| next_opinions_range(config, engine, index * chunk, out));
    Ok(with_opinions(config, &opinions))
}

/// `impact_lattice::run` with parallel stepping.
pub fn parallel_run(
    params: &ModelParams,
    schedule: &[u32],
    engine_kind: EngineKind,
) -> Result<RunResult, ModelError> {
    for &entry in schedule {
        if entry > params.steps {
            return Err(ModelError::ScheduleOutOfRange {
                entry,
                steps: params.steps,
            });
        }
    }
    let engine = Engine::new(engine_kind, params);
    let mut config = Configuration::initial(*params)?;
    let mut snapshots = Vec::new();
    if schedule.contains(&0) {
        snapshots.push(Snapshot { step: 0, config: config.clone() });
    }
    for s in 1..=params.steps {
        config = parallel_step(&config, &engine)?;
        if schedule.contains(&s) {
            snapshots.push(Snapshot { step: s, config: config.clone() });
        }
    }
    Ok(RunResult { final_config: config, snapshots })
}

/// Ensemble with runs scheduled in parallel and reduced in run order.
pub fn parallel_ensemble(
    params: &ModelParams,
    n_runs: u32,
    measure_step: u32,
    engine_kind: EngineKind,
) -> Result<EnsembleStats, ModelError> {
    let observables: Result<Vec<_>, ModelError> = (0..n_runs)
        .into_par_iter()
        .map(|r| measure_run(params, r, measure_step, engine_kind))
        .collect();
    Ok(aggregate(params, measure_step, &observables?))
}

fn emit_snapshot(
    dir: &Path,
    manifest: &mut Manifest,
    snapshot: &Snapshot,
    engine: &Engine,
) -> Result<(), CliError> {
    let side = snapshot.config.side();
    let opinions = snapshot.config.opinions();
    let step = snapshot.step;

    let csv = emit::opinions_csv_bytes(&opinions, side);
    let name = format!("opinions_t{step}.csv");
    emit::write_atomic(&dir.join(&name), &csv)?;
    manifest.record_output("opinions_csv", &name, &csv);

    let ppm = emit::opinions_ppm_bytes(&opinions, side);
    let name = format!("opinions_t{step}.ppm");
    emit::write_atomic(&dir.join(&name), &ppm)?;
    manifest.record_output("opinions_ppm", &name, &ppm);

    let field: SustainField =
        sustain_probability_field(&snapshot.config, engine).map_err(CliError::from)?;

    let csv = emit::sustain_csv_bytes(&field.values, side);
    let name = format!("sustain_t{step}.csv");
    emit::write_atomic(&dir.join(&name), &csv)?;
    manifest.record_output("sustain_csv", &name, &csv);

    let pgm = emit::sustain_pgm_bytes(&field.values, side);
    let name = format!("sustain_t{step}.pgm");
    emit::write_atomic(&dir.join(&name), &pgm)?;
    manifest.record_output("sustain_pgm", &name, &pgm);

    Ok(())
}

/// Execute a `run` job: evolve, emit scheduled snapshot artifacts, write
/// the manifest last.
pub fn execute_run(job: &Job) -> Result<Manifest, CliError> {
    std::fs::create_dir_all(&job.out_dir)
        .map_err(|e| CliError::Runtime(format!("creating {}: {e}", job.out_dir.display())))?;
    let result = parallel_run(&job.params, &job.snapshots, job.engine).map_err(CliError::from)?;
    let engine = Engine::new(job.engine, &job.params);
    let mut manifest = Manifest::new("run", &job.params, job.engine, 1);
    manifest.snapshot_schedule = job.snapshots.clone();
    for snapshot in &result.snapshots {
        emit_snapshot(&job.out_dir, &mut manifest, snapshot, &engine)?;
    }
    manifest.save(&job.out_dir.join("manifest.json"))?;
    Ok(manifest)
}

/// Display-format a parameter for file names and CSV cells
/// (`1` not `1.0`; `2.5` stays `2.5`).
pub fn format_param(x: f64) -> String {
    format!("{x}")
}

/// Execute a `sweep` job: one ensemble per (T, alpha) cell, cells evaluated
/// in parallel, artifacts written in deterministic cell order afterwards.
pub fn execute_sweep(job: &Job, grid: &SweepGrid) -> Result<Manifest, CliError> {
    std::fs::create_dir_all(&job.out_dir)
        .map_err(|e| CliError::Runtime(format!("creating {}: {e}", job.out_dir.display())))?;

    let mut cells = Vec::new();
    for &t in &grid.temperatures {
        for &alpha in &grid.alphas {
            cells.push((t, alpha));
        }
    }

    let results: Vec<Result<EnsembleStats, ModelError>> = cells
        .par_iter()
        .map(|&(t, alpha)| {
            let mut params = job.params;
            params.temperature = t;
            params.alpha = alpha;
            parallel_ensemble(&params, job.runs, params.steps, job.engine)
        })
        .collect();

    let mut stats = Vec::with_capacity(results.len());
    for ((t, alpha), result) in cells.iter().zip(results) {
        match result {
            Ok(s) => stats.push(s),
            Err(e) => {
                return Err(CliError::Runtime(format!(
                    "sweep cell (T={t}, alpha={alpha}) failed: {e}"
                )))
            }
        }
    }

    let mut manifest = Manifest::new("sweep", &job.params, job.engine, job.runs);
    manifest.sweep = Some(SweepDoc {
        alphas: grid.alphas.clone(),
        temperatures: grid.temperatures.clone(),
    });

    let mut table = String::from(
        "T,alpha,mean_smax_frac,std_smax_frac,mean_n_clusters,mean_n_small_clusters,runs\n",
    );
    for s in &stats {
        table.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            format_param(s.params.temperature),
            format_param(s.params.alpha),
            emit::format_fixed6(s.mean_largest_fraction),
            emit::format_fixed6(s.std_largest_fraction),
            emit::format_fixed6(s.mean_cluster_count),
            emit::format_fixed6(s.mean_small_cluster_count),
            s.runs,
        ));
    }
    emit::write_atomic(&job.out_dir.join("smax_table.csv"), table.as_bytes())?;
    manifest.record_output("smax_table_csv", "smax_table.csv", table.as_bytes());

    for s in &stats {
        let mut histogram = String::from("size,mean_count\n");
        for (&size, &count) in &s.mean_histogram {
            histogram.push_str(&format!("{size},{}\n", emit::format_fixed6(count)));
        }
        let name = format!(
            "histogram_{}_{}.csv",
            format_param(s.params.alpha),
            format_param(s.params.temperature)
        );
        emit::write_atomic(&job.out_dir.join(&name), histogram.as_bytes())?;
        manifest.record_output("histogram_csv", &name, histogram.as_bytes());
    }

    manifest.save(&job.out_dir.join("manifest.json"))?;
    Ok(manifest)
}
