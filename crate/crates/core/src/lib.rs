//! Multi-opinion social-impact dynamics on a square lattice.
//!
//! Agents occupy the nodes of an `L x L` grid with open boundaries. Every
//! agent holds one of `K` opinions and carries two fixed strengths: its
//! persuasion `p` (pull on agents of other opinions) and its support `s`
//! (reinforcement of agents sharing its opinion). Each step, the impact of
//! every opinion on every agent is accumulated over all other agents with a
//! distance-scaled weight, and agents resample their opinion from a
//! Boltzmann distribution at social temperature `T` (strict maximization at
//! `T = 0`).
//!
//! The crate is `no_std` (with `alloc`) and fully deterministic: all
//! randomness flows through counter-based streams addressed by
//! `(seed, step, agent)`, so trajectories do not depend on evaluation order
//! or parallelism. IO, CLI and file formats live in the companion
//! `impact-lattice-cli` crate.

#![no_std]

extern crate alloc;

mod cluster;
mod error;
mod evolve;
mod impact;
mod kernel;
mod lattice;
mod observables;
mod params;
mod rng;

pub use cluster::{label_clusters, ClusterLabeling};
pub use error::ModelError;
pub use evolve::{next_opinions_range, run, step, with_opinions, Engine, EngineKind, RunResult, Snapshot};
pub use impact::{
    impact, opinion_probabilities, sample_opinion, scaling, ImpactField, ImpactVector,
    STRENGTH_GAIN,
};
pub use kernel::InteractionKernel;
pub use lattice::{coords, distance, Agent, Configuration};
pub use observables::{
    aggregate, ensemble_run, measure_run, sustain_frequency_field, sustain_probability_field,
    trend_check, EnsembleStats, RunObservables, SustainField, SweepAxis, TrendReport, TrendStep,
    SMALL_CLUSTER_THRESHOLD,
};
pub use params::{ModelParams, ScalingKind, UpdateScheme};
pub use rng::{mix, mix64, CounterRng};
