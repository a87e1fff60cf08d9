//! Sustain-probability fields and ensemble-level cluster statistics.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cluster::label_clusters;
use crate::error::ModelError;
use crate::evolve::{run, Engine, EngineKind};
use crate::impact::{impact_into, opinion_probabilities_into, sample_opinion};
use crate::kernel::LANES;
use crate::lattice::Configuration;
use crate::params::ModelParams;
use crate::rng::{mix, CounterRng};

/// Per-agent probability of keeping the current opinion at the next
/// synchronous update.
#[derive(Debug, Clone, PartialEq)]
pub struct SustainField {
    pub values: Vec<f64>,
}

/// Analytic sustain probabilities: the Boltzmann choice probability of each
/// agent's current opinion under the current impacts.
pub fn sustain_probability_field(
    config: &Configuration,
    engine: &Engine,
) -> Result<SustainField, ModelError> {
    engine.check(&config.params)?;
    let k = config.params.opinion_count as usize;
    let mut impacts = vec![0.0; k];
    let mut probabilities = vec![0.0; k];
    let mut lanes = vec![[0.0f64; LANES]; k];
    let mut values = Vec::with_capacity(config.agent_count());
    for target in 0..config.agent_count() {
        match engine {
            Engine::Naive => impact_into(config, target, &mut impacts),
            Engine::Kernel(kernel) => {
                kernel.impacts_into(config, target, &mut impacts, &mut lanes)
            }
        }
        opinion_probabilities_into(&impacts, config.params.temperature, &mut probabilities);
        values.push(probabilities[config.agents[target].opinion as usize]);
    }
    Ok(SustainField { values })
}

/// Monte Carlo estimate of the sustain probabilities: frequency of keeping
/// the current opinion over `samples` independently resampled updates.
/// Measurement draws come from their own stream domain and never perturb
/// the trajectory streams.
pub fn sustain_frequency_field(
    config: &Configuration,
    engine: &Engine,
    samples: u32,
) -> Result<SustainField, ModelError> {
    engine.check(&config.params)?;
    let k = config.params.opinion_count as usize;
    let mut impacts = vec![0.0; k];
    let mut probabilities = vec![0.0; k];
    let mut lanes = vec![[0.0f64; LANES]; k];
    let mut keeps = vec![0u64; config.agent_count()];
    for (target, keep_count) in keeps.iter_mut().enumerate() {
        match engine {
            Engine::Naive => impact_into(config, target, &mut impacts),
            Engine::Kernel(kernel) => {
                kernel.impacts_into(config, target, &mut impacts, &mut lanes)
            }
        }
        opinion_probabilities_into(&impacts, config.params.temperature, &mut probabilities);
        let current = config.agents[target].opinion;
        for sample in 0..samples {
            let mut rng =
                CounterRng::measure_stream(config.params.seed, sample as u64, target as u64);
            if sample_opinion(&probabilities, rng.next_f64()) == current {
                *keep_count += 1;
            }
        }
    }
    Ok(SustainField {
        values: keeps
            .iter()
            .map(|&c| c as f64 / samples as f64)
            .collect(),
    })
}

/// Cluster observables of a single finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunObservables {
    pub largest_fraction: f64,
    pub cluster_count: u32,
    pub small_cluster_count: u32,
    pub histogram: BTreeMap<u32, u32>,
}

/// Clusters counted as "small" hold at most this many agents.
pub const SMALL_CLUSTER_THRESHOLD: u32 = 5;

/// Run one ensemble member to `measure_step` and measure its clustering.
///
/// Member `run_index` uses the derived seed `mix(params.seed, run_index)`.
pub fn measure_run(
    params: &ModelParams,
    run_index: u32,
    measure_step: u32,
    engine_kind: EngineKind,
) -> Result<RunObservables, ModelError> {
    let mut member = *params;
    member.seed = mix(params.seed, run_index as u64);
    member.steps = measure_step;
    let result = run(&member, &[], engine_kind)?;
    let labeling = label_clusters(&result.final_config.opinions(), member.side as usize);
    Ok(RunObservables {
        largest_fraction: labeling.largest_cluster_fraction(),
        cluster_count: labeling.cluster_count() as u32,
        small_cluster_count: labeling.count_small_clusters(SMALL_CLUSTER_THRESHOLD) as u32,
        histogram: labeling.size_histogram(),
    })
}

/// Ensemble aggregates at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub params: ModelParams,
    pub measure_step: u32,
    pub runs: u32,
    pub mean_largest_fraction: f64,
    /// Population standard deviation over runs (zero for a single run).
    pub std_largest_fraction: f64,
    pub mean_cluster_count: f64,
    pub mean_small_cluster_count: f64,
    /// Mean count of clusters of each size, averaged over runs.
    pub mean_histogram: BTreeMap<u32, f64>,
}

/// Ordered reduction of per-run observables (index order, not completion
/// order), so aggregates are independent of how the runs were scheduled.
pub fn aggregate(
    params: &ModelParams,
    measure_step: u32,
    observables: &[RunObservables],
) -> EnsembleStats {
    let n = observables.len() as f64;
    let mean_largest = observables.iter().map(|o| o.largest_fraction).sum::<f64>() / n;
    let variance = observables
        .iter()
        .map(|o| {
            let d = o.largest_fraction - mean_largest;
            d * d
        })
        .sum::<f64>()
        / n;
    let mean_clusters = observables.iter().map(|o| o.cluster_count as f64).sum::<f64>() / n;
    let mean_small = observables
        .iter()
        .map(|o| o.small_cluster_count as f64)
        .sum::<f64>()
        / n;
    let mut mean_histogram = BTreeMap::new();
    for o in observables {
        for (&size, &count) in &o.histogram {
            *mean_histogram.entry(size).or_insert(0.0) += count as f64;
        }
    }
    for v in mean_histogram.values_mut() {
        *v /= n;
    }
    EnsembleStats {
        params: *params,
        measure_step,
        runs: observables.len() as u32,
        mean_largest_fraction: mean_largest,
        std_largest_fraction: libm::sqrt(variance),
        mean_cluster_count: mean_clusters,
        mean_small_cluster_count: mean_small,
        mean_histogram,
    }
}

/// Serial reference ensemble: `n_runs` independent members measured at
/// `measure_step`, aggregated in run order.
pub fn ensemble_run(
    params: &ModelParams,
    n_runs: u32,
    measure_step: u32,
    engine_kind: EngineKind,
) -> Result<EnsembleStats, ModelError> {
    let mut observables = Vec::with_capacity(n_runs as usize);
    for r in 0..n_runs {
        observables.push(measure_run(params, r, measure_step, engine_kind)?);
    }
    Ok(aggregate(params, measure_step, &observables))
}

/// Which parameter varies across a trend sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Alpha,
    Temperature,
}

impl SweepAxis {
    fn value(self, stats: &EnsembleStats) -> f64 {
        match self {
            SweepAxis::Alpha => stats.params.alpha,
            SweepAxis::Temperature => stats.params.temperature,
        }
    }
}

/// One adjacent pair in a trend report.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendStep {
    pub from: f64,
    pub to: f64,
    pub largest_fraction_delta: f64,
    pub cluster_count_delta: f64,
}

/// Pairwise monotonicity of ensemble aggregates along one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    pub axis: SweepAxis,
    pub steps: Vec<TrendStep>,
    /// Mean largest-cluster fraction never grows along the axis.
    pub fraction_non_increasing: bool,
    /// Mean cluster count never shrinks along the axis.
    pub count_non_decreasing: bool,
}

/// Compare adjacent parameter points along `axis`; all other parameters
/// must agree.
pub fn trend_check(stats: &[EnsembleStats], axis: SweepAxis) -> Result<TrendReport, ModelError> {
    if stats.len() < 2 {
        return Err(ModelError::TrendAxisNotIncreasing);
    }
    let first = &stats[0];
    for s in &stats[1..] {
        if s.params.side != first.params.side {
            return Err(ModelError::TrendParameterMismatch { name: "L" });
        }
        if s.params.opinion_count != first.params.opinion_count {
            return Err(ModelError::TrendParameterMismatch { name: "K" });
        }
        if s.measure_step != first.measure_step {
            return Err(ModelError::TrendParameterMismatch { name: "steps" });
        }
        let fixed_matches = match axis {
            SweepAxis::Alpha => s.params.temperature == first.params.temperature,
            SweepAxis::Temperature => s.params.alpha == first.params.alpha,
        };
        if !fixed_matches {
            return Err(ModelError::TrendParameterMismatch {
                name: match axis {
                    SweepAxis::Alpha => "temperature",
                    SweepAxis::Temperature => "alpha",
                },
            });
        }
    }
    for pair in stats.windows(2) {
        if axis.value(&pair[1]) <= axis.value(&pair[0]) {
            return Err(ModelError::TrendAxisNotIncreasing);
        }
    }
    let steps = stats
        .windows(2)
        .map(|pair| TrendStep {
            from: axis.value(&pair[0]),
            to: axis.value(&pair[1]),
            largest_fraction_delta: pair[1].mean_largest_fraction - pair[0].mean_largest_fraction,
            cluster_count_delta: pair[1].mean_cluster_count - pair[0].mean_cluster_count,
        })
        .collect::<Vec<_>>();
    Ok(TrendReport {
        axis,
        fraction_non_increasing: steps.iter().all(|s| s.largest_fraction_delta <= 0.0),
        count_non_decreasing: steps.iter().all(|s| s.cluster_count_delta >= 0.0),
        steps,
    })
}
