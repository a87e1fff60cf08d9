//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values (visible with `--nocapture`).
//!
//! Reference targets (L=41, K=2, 1000 steps unless stated):
//!   1. alpha=1 consensus column: mean S_max/L^2 >= 0.99 for T in 0..=5.
//!   2. T=0 row: means at alpha=2/3/6 within +-15pp of 94/54/34, decreasing.
//!   3. At T in {0,1,3}: mean cluster count non-decreasing and mean S_max
//!      fraction non-increasing across alpha in {1,2,3,6}.
//!   4. Mean cluster count at (alpha=6, T=1) below (alpha=6, T=0).
//!   5. Zero-temperature sustain probabilities are exactly 0 or 1.
//!   6. Boundary agents sustain no better than interior agents.
//!   7. Oracle equivalences (naive impact, kernel engine, cluster labeling).
//!   8. smax_table.csv is byte-identical across thread counts {1, 4, auto}.
//!   9. Choice probabilities normalize within 1e-12.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use impact_lattice::{
    impact, label_clusters, run, sustain_probability_field, trend_check, Configuration,
    CounterRng, Engine, EngineKind, EnsembleStats, InteractionKernel, ModelParams,
    ScalingKind, SweepAxis,
};
use impact_lattice_cli::runner::parallel_ensemble;

const MASTER_SEED: u64 = 7;
const STEPS: u32 = 1000;

fn base_params(alpha: f64, temperature: f64) -> ModelParams {
    ModelParams::new(41, 2, alpha, temperature, STEPS, MASTER_SEED)
}

type CellKey = (u64, u64, u32);

/// Shared ensemble cells so criteria reuse each other's runs.
fn cell(alpha: f64, temperature: f64, runs: u32) -> EnsembleStats {
    static CACHE: OnceLock<Mutex<HashMap<CellKey, EnsembleStats>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (alpha.to_bits(), temperature.to_bits(), runs);
    let mut guard = cache.lock().unwrap();
    guard
        .entry(key)
        .or_insert_with(|| {
            let params = base_params(alpha, temperature);
            parallel_ensemble(&params, runs, STEPS, EngineKind::Kernel).unwrap()
        })
        .clone()
}

#[test]
fn criterion_01_consensus_column() {
    let mut means = Vec::new();
    for t in 0..=5 {
        let stats = cell(1.0, t as f64, 10);
        means.push((t, stats.mean_largest_fraction));
    }
    for &(t, mean) in &means {
        assert!(
            mean >= 0.99,
            "alpha=1, T={t}: mean largest-cluster fraction {mean} below 0.99"
        );
    }
    println!(
        "[PASS] criterion 1 — alpha=1 consensus column: fractions {:?}",
        means.iter().map(|(_, m)| (m * 1e4).round() / 1e4).collect::<Vec<_>>()
    );
}

#[test]
fn criterion_02_zero_temperature_row() {
    let targets = [(2.0, 94.0), (3.0, 54.0), (6.0, 34.0)];
    let mut measured = Vec::new();
    for &(alpha, target) in &targets {
        let stats = cell(alpha, 0.0, 20);
        let percent = stats.mean_largest_fraction * 100.0;
        assert!(
            (percent - target).abs() <= 15.0,
            "alpha={alpha}: mean {percent:.1}% outside {target}+-15pp"
        );
        measured.push(percent);
    }
    assert!(
        measured[0] > measured[1] && measured[1] > measured[2],
        "T=0 row not strictly decreasing: {measured:?}"
    );
    println!(
        "[PASS] criterion 2 — T=0 row: measured {:.1}/{:.1}/{:.1}% vs 94/54/34 (+-15pp)",
        measured[0], measured[1], measured[2]
    );
}

#[test]
fn criterion_03_trend_suite() {
    for &t in &[0.0f64, 1.0, 3.0] {
        let stats: Vec<EnsembleStats> = [1.0, 2.0, 3.0, 6.0]
            .iter()
            .map(|&alpha| {
                // reuse the deeper ensembles where other criteria need them
                let runs = match (alpha, t) {
                    (a, 0.0) if a >= 2.0 => 20,
                    (6.0, 1.0) => 20,
                    _ => 10,
                };
                cell(alpha, t, runs)
            })
            .collect();
        let report = trend_check(&stats, SweepAxis::Alpha).unwrap();
        assert!(
            report.fraction_non_increasing,
            "T={t}: S_max fraction increased along alpha: {:?}",
            report.steps
        );
        assert!(
            report.count_non_decreasing,
            "T={t}: cluster count decreased along alpha: {:?}",
            report.steps
        );
        println!(
            "[PASS] criterion 3 — trends at T={t}: fractions {:?}, counts {:?}",
            stats
                .iter()
                .map(|s| (s.mean_largest_fraction * 1e3).round() / 1e3)
                .collect::<Vec<_>>(),
            stats
                .iter()
                .map(|s| (s.mean_cluster_count * 10.0).round() / 10.0)
                .collect::<Vec<_>>()
        );
    }
}

#[test]
fn criterion_04_low_noise_orders_the_system() {
    let cold = cell(6.0, 0.0, 20);
    let warm = cell(6.0, 1.0, 20);
    assert!(
        warm.mean_cluster_count < cold.mean_cluster_count,
        "cluster count at (alpha=6, T=1) = {} not below (alpha=6, T=0) = {}",
        warm.mean_cluster_count,
        cold.mean_cluster_count
    );
    println!(
        "[PASS] criterion 4 — cluster count {:.1} at (6, T=1) < {:.1} at (6, T=0)",
        warm.mean_cluster_count, cold.mean_cluster_count
    );
}

#[test]
fn criterion_05_zero_temperature_sustain_degeneracy() {
    let mut rng = CounterRng::new(505);
    let mut checked = 0usize;
    for case in 0..100u64 {
        let side = 5 + (case % 37) as u32; // L in 5..=41
        let opinions = 2 + (case % 2) as u32;
        let alpha = 1.0 + rng.next_f64() * 5.0;
        let mut params = ModelParams::new(side, opinions, alpha, 0.0, 0, 31_000 + case);
        if case % 3 == 0 {
            params.scaling = ScalingKind::PowShifted;
        }
        let config = Configuration::initial(params).unwrap();
        let engine = Engine::new(EngineKind::Kernel, &params);
        let field = sustain_probability_field(&config, &engine).unwrap();
        for &v in &field.values {
            assert!(v == 0.0 || v == 1.0, "L={side} case {case}: sustain {v}");
            checked += 1;
        }
    }
    println!(
        "[PASS] criterion 5 — T=0 sustain values all in {{0,1}} over 100 configs ({checked} agents)"
    );
}

#[test]
fn criterion_06_boundary_agents_sustain_less() {
    for &t in &[1.0f64, 2.0, 3.0] {
        let mut boundary_sum = 0.0;
        let mut boundary_n = 0usize;
        let mut interior_sum = 0.0;
        let mut interior_n = 0usize;
        for r in 0..10u64 {
            let mut params = base_params(3.0, t);
            params.steps = 100;
            params.seed = impact_lattice::mix(MASTER_SEED, r);
            let result = run(&params, &[], EngineKind::Kernel).unwrap();
            let config = &result.final_config;
            let engine = Engine::new(EngineKind::Kernel, &params);
            let field = sustain_probability_field(config, &engine).unwrap();
            let side = config.side();
            let opinions = config.opinions();
            for i in 0..opinions.len() {
                let (row, col) = (i / side, i % side);
                let mut is_boundary = false;
                if row > 0 && opinions[i - side] != opinions[i] {
                    is_boundary = true;
                }
                if row + 1 < side && opinions[i + side] != opinions[i] {
                    is_boundary = true;
                }
                if col > 0 && opinions[i - 1] != opinions[i] {
                    is_boundary = true;
                }
                if col + 1 < side && opinions[i + 1] != opinions[i] {
                    is_boundary = true;
                }
                if is_boundary {
                    boundary_sum += field.values[i];
                    boundary_n += 1;
                } else {
                    interior_sum += field.values[i];
                    interior_n += 1;
                }
            }
        }
        assert!(boundary_n > 0 && interior_n > 0, "T={t}: degenerate split");
        let boundary_mean = boundary_sum / boundary_n as f64;
        let interior_mean = interior_sum / interior_n as f64;
        assert!(
            boundary_mean <= interior_mean,
            "T={t}: boundary {boundary_mean} above interior {interior_mean}"
        );
        println!(
            "[PASS] criterion 6 — sustain at T={t}: boundary {boundary_mean:.4} <= interior {interior_mean:.4}"
        );
    }
}

/// Brute-force impact oracle, independent of the library paths.
fn impact_oracle(config: &Configuration, target: usize) -> Vec<f64> {
    let params = &config.params;
    let side = params.side as usize;
    let mut impacts = vec![0.0f64; params.opinion_count as usize];
    for k in 0..params.opinion_count {
        for j in 0..config.agent_count() {
            if config.agents[j].opinion != k || (j == target && !params.self_support) {
                continue;
            }
            let dr = (target / side) as f64 - (j / side) as f64;
            let dc = (target % side) as f64 - (j % side) as f64;
            let d = (dr * dr + dc * dc).sqrt();
            let g = match params.scaling {
                ScalingKind::PowShifted => (1.0 + d).powf(params.alpha),
                ScalingKind::ShiftedPow => 1.0 + d.powf(params.alpha),
            };
            let w = if k == config.agents[target].opinion {
                config.agents[j].support
            } else {
                config.agents[j].persuasion
            };
            impacts[k as usize] += 4.0 * w / g;
        }
    }
    impacts
}

#[test]
fn criterion_07_oracle_equivalences() {
    // naive impact against the brute-force triple loop
    for case in 0..40u64 {
        let mut params = ModelParams::new(
            2 + (case % 5) as u32,
            1 + (case % 3) as u32,
            [0.0, 1.0, 2.0, 3.0, 6.0][(case % 5) as usize],
            1.0,
            0,
            70_000 + case,
        );
        if case % 2 == 1 {
            params.scaling = ScalingKind::PowShifted;
        }
        let config = Configuration::initial(params).unwrap();
        for i in 0..config.agent_count() {
            let got = impact(&config, i).unwrap();
            let expect = impact_oracle(&config, i);
            for (k, (g, e)) in got.values.iter().zip(&expect).enumerate() {
                assert!(
                    (g - e).abs() <= 1e-12,
                    "naive vs oracle: case {case} agent {i} opinion {k}"
                );
            }
        }
    }

    // kernel engine against the naive engine on full trajectories
    for &alpha in &[0.0, 1.0, 2.0, 3.0, 6.0] {
        let params = ModelParams::new(8, 3, alpha, 1.0, 25, 71_000);
        let kernel = InteractionKernel::for_params(&params);
        let engine_naive = Engine::new(EngineKind::Naive, &params);
        let engine_kernel = Engine::new(EngineKind::Kernel, &params);
        let mut a = Configuration::initial(params).unwrap();
        let mut b = a.clone();
        for _ in 0..25 {
            let field = kernel.impact_field(&a).unwrap();
            for i in 0..a.agent_count() {
                let naive_iv = impact(&a, i).unwrap();
                for k in 0..3 {
                    assert!(
                        (field.agent(i)[k] - naive_iv.values[k]).abs() <= 1e-10,
                        "kernel vs naive field: alpha={alpha} agent {i}"
                    );
                }
            }
            a = impact_lattice::step(&a, &engine_naive).unwrap();
            b = impact_lattice::step(&b, &engine_kernel).unwrap();
            assert_eq!(a.opinions(), b.opinions(), "trajectory split at alpha={alpha}");
        }
    }

    // Hoshen-Kopelman against recursive flood fill
    let mut rng = CounterRng::new(0x0707);
    for case in 0..200 {
        let side = 2 + (case % 9);
        let grid: Vec<u32> = (0..side * side)
            .map(|_| rng.next_index(2 + (case % 2) as u32))
            .collect();
        let labeling = label_clusters(&grid, side);
        let expect = flood_fill(&grid, side);
        assert_eq!(labeling.labels, expect, "labeling case {case}");
    }

    println!("[PASS] criterion 7 — naive<=1e-12, kernel<=1e-10, labeling exact");
}

fn flood_fill(opinions: &[u32], cols: usize) -> Vec<u32> {
    let rows = opinions.len() / cols;
    let mut labels = vec![u32::MAX; opinions.len()];
    let mut next = 0u32;
    for start in 0..opinions.len() {
        if labels[start] != u32::MAX {
            continue;
        }
        labels[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (r, c) = (i / cols, i % cols);
            let mut visit = |j: usize, stack: &mut Vec<usize>| {
                if labels[j] == u32::MAX && opinions[j] == opinions[i] {
                    labels[j] = next;
                    stack.push(j);
                }
            };
            if r > 0 {
                visit(i - cols, &mut stack);
            }
            if r + 1 < rows {
                visit(i + cols, &mut stack);
            }
            if c > 0 {
                visit(i - 1, &mut stack);
            }
            if c + 1 < cols {
                visit(i + 1, &mut stack);
            }
        }
        next += 1;
    }
    labels
}

#[test]
fn criterion_08_table_bytes_stable_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let mut tables = Vec::new();
    for (label, threads) in [("one", "1"), ("four", "4"), ("auto", "0")] {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_impact-lattice"))
            .current_dir(tmp.path())
            .env("IMPACT_LATTICE_THREADS", threads)
            .args([
                "sweep", "--L", "16", "--steps", "50", "--runs", "4", "--seed", "7",
                "--alphas", "1,3", "--temperatures", "0,1", "--out", label,
            ])
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "sweep with {threads} threads failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        tables.push(std::fs::read(tmp.path().join(label).join("smax_table.csv")).unwrap());
    }
    assert_eq!(tables[0], tables[1], "1 vs 4 threads");
    assert_eq!(tables[0], tables[2], "1 vs auto threads");
    println!(
        "[PASS] criterion 8 — smax_table.csv byte-identical across threads ({} bytes)",
        tables[0].len()
    );
}

#[test]
fn criterion_09_probabilities_normalize() {
    let mut rng = CounterRng::new(909);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let k = 1 + rng.next_index(8) as usize;
        let impacts: Vec<f64> = (0..k).map(|_| rng.next_f64() * 50.0).collect();
        let t = 1e-6 * (10.0f64 / 1e-6).powf(rng.next_f64());
        let p = impact_lattice::opinion_probabilities(&impacts, t);
        let total: f64 = p.iter().sum();
        worst = worst.max((total - 1.0).abs());
    }
    assert!(worst <= 1e-12, "worst normalization error {worst}");
    println!("[PASS] criterion 9 — softmax normalization, worst |sum-1| = {worst:.2e}");
}
