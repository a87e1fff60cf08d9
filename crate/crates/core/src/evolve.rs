//! Time evolution: engine selection, synchronous and asynchronous stepping,
//! and whole-run orchestration with snapshots.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::ModelError;
use crate::impact::{impact_into, opinion_probabilities_into, sample_opinion};
use crate::kernel::{InteractionKernel, LANES};
use crate::lattice::Configuration;
use crate::params::{ModelParams, UpdateScheme};
use crate::rng::CounterRng;

/// Which impact accumulation path drives the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    /// Reference path: per-pair distance scaling evaluated on the fly.
    Naive,
    /// Fast path: precomputed inverse-scaling table.
    Kernel,
}

impl EngineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Naive => "naive",
            EngineKind::Kernel => "kernel",
        }
    }
}

/// An engine bound to one parameter set.
#[derive(Debug, Clone)]
pub enum Engine {
    Naive,
    Kernel(InteractionKernel),
}

impl Engine {
    pub fn new(kind: EngineKind, params: &ModelParams) -> Engine {
        match kind {
            EngineKind::Naive => Engine::Naive,
            EngineKind::Kernel => Engine::Kernel(InteractionKernel::for_params(params)),
        }
    }

    pub fn kind(&self) -> EngineKind {
        match self {
            Engine::Naive => EngineKind::Naive,
            Engine::Kernel(_) => EngineKind::Kernel,
        }
    }

    pub(crate) fn check(&self, params: &ModelParams) -> Result<(), ModelError> {
        match self {
            Engine::Naive => Ok(()),
            Engine::Kernel(kernel) => {
                if kernel.matches(params) {
                    Ok(())
                } else {
                    Err(ModelError::KernelMismatch {
                        kernel_side: kernel.side(),
                        kernel_alpha: kernel.alpha(),
                        config_side: params.side,
                        config_alpha: params.alpha,
                    })
                }
            }
        }
    }
}

/// Scratch buffers reused across the agents of one chunk.
struct AgentScratch {
    impacts: Vec<f64>,
    probabilities: Vec<f64>,
    lanes: Vec<[f64; LANES]>,
}

impl AgentScratch {
    fn new(opinion_count: usize) -> Self {
        AgentScratch {
            impacts: vec![0.0; opinion_count],
            probabilities: vec![0.0; opinion_count],
            lanes: vec![[0.0; LANES]; opinion_count],
        }
    }

    fn sample(&mut self, config: &Configuration, engine: &Engine, target: usize) -> u32 {
        match engine {
            Engine::Naive => impact_into(config, target, &mut self.impacts),
            Engine::Kernel(kernel) => {
                kernel.impacts_into(config, target, &mut self.impacts, &mut self.lanes)
            }
        }
        opinion_probabilities_into(
            &self.impacts,
            config.params.temperature,
            &mut self.probabilities,
        );
        let mut rng = CounterRng::update_stream(
            config.params.seed,
            config.step_index as u64,
            target as u64,
        );
        sample_opinion(&self.probabilities, rng.next_f64())
    }
}

/// Compute the synchronously updated opinions of agents
/// `start .. start + out.len()` against `config`.
///
/// Each agent consumes exactly one draw from its own `(seed, step, agent)`
/// stream, so any partition of the index range yields bit-identical results;
/// parallel drivers split the range across workers.
pub fn next_opinions_range(config: &Configuration, engine: &Engine, start: usize, out: &mut [u32]) {
    let mut scratch = AgentScratch::new(config.params.opinion_count as usize);
    for (offset, slot) in out.iter_mut().enumerate() {
        *slot = scratch.sample(config, engine, start + offset);
    }
}

/// Successor configuration with the given opinions and bumped step index.
pub fn with_opinions(config: &Configuration, opinions: &[u32]) -> Configuration {
    debug_assert_eq!(opinions.len(), config.agent_count());
    let mut next = config.clone();
    for (agent, &op) in next.agents.iter_mut().zip(opinions) {
        agent.opinion = op;
    }
    next.step_index = config.step_index + 1;
    next
}

/// Advance the configuration by one time step.
///
/// Synchronous scheme: all agents resample against the old configuration.
/// Asynchronous scheme: agents resample one at a time in row-major order,
/// each seeing the updates already applied this step.
pub fn step(config: &Configuration, engine: &Engine) -> Result<Configuration, ModelError> {
    engine.check(&config.params)?;
    match config.params.update {
        UpdateScheme::Synchronous => {
            let mut opinions = vec![0u32; config.agent_count()];
            next_opinions_range(config, engine, 0, &mut opinions);
            Ok(with_opinions(config, &opinions))
        }
        UpdateScheme::Asynchronous => {
            let mut work = config.clone();
            let mut scratch = AgentScratch::new(config.params.opinion_count as usize);
            for target in 0..work.agent_count() {
                let op = scratch.sample(&work, engine, target);
                work.agents[target].opinion = op;
            }
            work.step_index = config.step_index + 1;
            Ok(work)
        }
    }
}

/// Deep-copied lattice state captured mid-run.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: u32,
    pub config: Configuration,
}

/// Final state of a run plus any scheduled snapshots.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_config: Configuration,
    pub snapshots: Vec<Snapshot>,
}

/// Evolve a fresh configuration for `params.steps` steps, capturing deep
/// copies at the scheduled step indices (0 = initial state).
pub fn run(
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
        config = step(&config, &engine)?;
        if schedule.contains(&s) {
            snapshots.push(Snapshot { step: s, config: config.clone() });
        }
    }
    Ok(RunResult {
        final_config: config,
        snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ScalingKind;

    #[test]
    fn single_opinion_only_advances_the_clock() {
        let params = ModelParams::new(4, 1, 2.0, 1.5, 0, 3);
        let config = Configuration::initial(params).unwrap();
        let engine = Engine::new(EngineKind::Kernel, &params);
        let next = step(&config, &engine).unwrap();
        assert_eq!(next.step_index, 1);
        assert_eq!(next.opinions(), config.opinions());
    }

    #[test]
    fn unanimous_lattice_is_fixed_at_zero_temperature() {
        let mut params = ModelParams::new(5, 3, 2.0, 0.0, 0, 8);
        params.temperature = 0.0;
        let mut config = Configuration::initial(params).unwrap();
        for a in &mut config.agents {
            a.opinion = 2;
        }
        for kind in [EngineKind::Naive, EngineKind::Kernel] {
            let engine = Engine::new(kind, &params);
            let next = step(&config, &engine).unwrap();
            assert_eq!(next.opinions(), config.opinions());
        }
    }

    #[test]
    fn chunked_update_matches_full_update() {
        let params = ModelParams::new(4, 2, 1.0, 1.0, 0, 21);
        let config = Configuration::initial(params).unwrap();
        let engine = Engine::new(EngineKind::Kernel, &params);
        let mut full = vec![0u32; 16];
        next_opinions_range(&config, &engine, 0, &mut full);
        // any partition gives the same bits
        let mut pieces = vec![0u32; 16];
        for (start, len) in [(0usize, 5usize), (5, 1), (6, 7), (13, 3)] {
            next_opinions_range(&config, &engine, start, &mut pieces[start..start + len]);
        }
        assert_eq!(full, pieces);
    }

    #[test]
    fn run_with_zero_steps_returns_initial() {
        let params = ModelParams::new(6, 2, 2.0, 1.0, 0, 11);
        let result = run(&params, &[0], EngineKind::Kernel).unwrap();
        assert_eq!(result.final_config, Configuration::initial(params).unwrap());
        assert_eq!(result.snapshots.len(), 1);
        assert_eq!(result.snapshots[0].step, 0);
    }

    #[test]
    fn run_composes_like_manual_steps() {
        let mut params = ModelParams::new(5, 3, 1.5, 2.0, 5, 33);
        params.scaling = ScalingKind::PowShifted;
        let result = run(&params, &[2, 5], EngineKind::Kernel).unwrap();

        let engine = Engine::new(EngineKind::Kernel, &params);
        let mut config = Configuration::initial(params).unwrap();
        for _ in 0..5 {
            config = step(&config, &engine).unwrap();
        }
        assert_eq!(result.final_config, config);
        assert_eq!(result.snapshots.len(), 2);
        assert_eq!(result.snapshots[1].config, config);
    }

    #[test]
    fn run_rejects_far_schedule() {
        let params = ModelParams::new(4, 2, 1.0, 1.0, 10, 2);
        assert_eq!(
            run(&params, &[11], EngineKind::Naive).unwrap_err(),
            ModelError::ScheduleOutOfRange { entry: 11, steps: 10 }
        );
    }

    #[test]
    fn asynchronous_scheme_runs_and_differs() {
        let mut params = ModelParams::new(5, 2, 1.0, 4.0, 3, 17);
        params.update = UpdateScheme::Asynchronous;
        let async_run = run(&params, &[], EngineKind::Kernel).unwrap();
        let mut sync_params = params;
        sync_params.update = UpdateScheme::Synchronous;
        let sync_run = run(&sync_params, &[], EngineKind::Kernel).unwrap();
        assert_eq!(async_run.final_config.step_index, 3);
        // same seed, different schedule semantics
        assert_ne!(async_run.final_config.opinions(), sync_run.final_config.opinions());
    }

    #[test]
    fn step_rejects_foreign_kernel() {
        let params = ModelParams::new(4, 2, 1.0, 1.0, 1, 2);
        let other = ModelParams::new(4, 2, 2.0, 1.0, 1, 2);
        let config = Configuration::initial(params).unwrap();
        let engine = Engine::new(EngineKind::Kernel, &other);
        assert!(matches!(
            step(&config, &engine),
            Err(ModelError::KernelMismatch { .. })
        ));
    }
}
