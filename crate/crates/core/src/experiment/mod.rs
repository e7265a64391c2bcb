//! Seeded multi-trial speed sweeps, aggregation and export.

mod config;
mod export;
mod stats;

pub use config::{
    load_config, ConfigDocument, ExperimentPlan, MopsoSettings, SpeedSampling, FULL_SCALE_ITERATIONS,
    FULL_SCALE_POPULATION,
};
pub use export::{
    export, range_label, write_aggregate_csv, write_front_csv, write_trials_csv, ExportOptions,
    AGGREGATE_HEADER, FRONT_HEADER, TRIALS_HEADER,
};
pub use stats::Stats;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::assignment::{power_consumption, ObjectivePair};
use crate::error::Result;
use crate::mopso::{best_compromise, IterationRecord};
use crate::network::{build_mobility, build_topology, Adjacency};
use crate::oracle::{hypervolume, true_pareto_front, OracleResult, DEFAULT_BUDGET};
use crate::plan::plan;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub speed_range: [f64; 2],
    /// Representative speed the mobility model was built at.
    pub speed: f64,
    pub seed: u64,
    pub j1: f64,
    pub j2: f64,
    pub power_mw: f64,
    pub wall_ms: u128,
}

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub summary: TrialSummary,
    pub front: Vec<ObjectivePair>,
    pub compromise: usize,
    pub history: Vec<IterationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub speed_range: [f64; 2],
    pub trials: usize,
    pub j1: Stats,
    pub j2: Stats,
    pub power_mw: Stats,
    /// Mean best-compromise `J¹ + J²`.
    pub overhead: f64,
}

/// Reference front for one speed range, with each trial's hypervolume
/// measured against the same reference point.
#[derive(Debug, Clone)]
pub struct OracleComparison {
    pub speed_range: [f64; 2],
    pub oracle: OracleResult,
    pub compromise: usize,
    pub trial_hypervolumes: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentResults {
    pub trials: Vec<TrialResult>,
    pub aggregates: Vec<AggregateRow>,
    pub oracle: Vec<OracleComparison>,
}

/// Groups per-trial rows by speed range (in first-seen order) and computes
/// mean, sample STD and RSD of each reported quantity.
pub fn aggregate(trials: &[TrialSummary]) -> Vec<AggregateRow> {
    let mut ranges: Vec<[f64; 2]> = Vec::new();
    for t in trials {
        if !ranges.contains(&t.speed_range) {
            ranges.push(t.speed_range);
        }
    }
    ranges
        .into_iter()
        .map(|range| {
            let rows: Vec<&TrialSummary> = trials.iter().filter(|t| t.speed_range == range).collect();
            let col = |f: fn(&TrialSummary) -> f64| rows.iter().map(|t| f(t)).collect::<Vec<_>>();
            let overhead = col(|t| t.j1 + t.j2);
            AggregateRow {
                speed_range: range,
                trials: rows.len(),
                j1: Stats::of(&col(|t| t.j1)),
                j2: Stats::of(&col(|t| t.j2)),
                power_mw: Stats::of(&col(|t| t.power_mw)),
                overhead: Stats::of(&overhead).mean,
            }
        })
        .collect()
}

/// Speed used for one trial of a range.
pub fn representative_speed(range: [f64; 2], sampling: SpeedSampling, seed: u64, range_index: usize) -> f64 {
    let [lo, hi] = range;
    match sampling {
        SpeedSampling::Midpoint => 0.5 * (lo + hi),
        SpeedSampling::Uniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1 + range_index as u64);
            lo + (hi - lo) * rng.gen::<f64>()
        }
    }
}

fn run_trial(
    doc: &ConfigDocument,
    adjacency: &Adjacency,
    range_index: usize,
    seed: u64,
) -> Result<TrialResult> {
    let network = &doc.network;
    let range = doc.experiment.speed_ranges[range_index];
    let speed = representative_speed(range, doc.experiment.speed_sampling, seed, range_index);
    let started = Instant::now();
    let mobility = build_mobility(network, speed, adjacency)?;
    let params = doc.mopso.params(2 * network.num_lists * network.num_cells, seed);
    let outcome = plan(network, &mobility, params)?;
    let best = outcome.compromise_objectives();
    let power_mw = power_consumption(&outcome.compromise, &mobility, network);
    let wall_ms = started.elapsed().as_millis();
    Ok(TrialResult {
        summary: TrialSummary {
            speed_range: range,
            speed,
            seed,
            j1: best.j1,
            j2: best.j2,
            power_mw,
            wall_ms,
        },
        front: outcome.mopso.front_objectives(),
        compromise: outcome.mopso.compromise,
        history: outcome.mopso.history,
    })
}

/// Runs every (range, seed) trial. Trials run concurrently; results come
/// back in range-major, seed-minor order, one `Result` per trial.
pub fn run_trials(doc: &ConfigDocument) -> Result<Vec<Result<TrialResult>>> {
    doc.validate()?;
    let adjacency = build_topology(&doc.network)?;
    let jobs: Vec<(usize, u64)> = (0..doc.experiment.speed_ranges.len())
        .flat_map(|r| doc.experiment.seeds.iter().map(move |&s| (r, s)))
        .collect();
    Ok(jobs
        .into_par_iter()
        .map(|(r, s)| run_trial(doc, &adjacency, r, s))
        .collect())
}

/// Runs the full plan. On a trial failure the completed trials are returned
/// alongside the first error so callers can still flush them.
pub fn run_experiment(doc: &ConfigDocument) -> std::result::Result<ExperimentResults, (ExperimentResults, crate::Error)> {
    let outcomes = match run_trials(doc) {
        Ok(o) => o,
        Err(e) => return Err((ExperimentResults::default(), e)),
    };
    let mut trials = Vec::with_capacity(outcomes.len());
    let mut failure = None;
    for o in outcomes {
        match o {
            Ok(t) => trials.push(t),
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    let summaries: Vec<TrialSummary> = trials.iter().map(|t| t.summary.clone()).collect();
    let results = ExperimentResults {
        aggregates: aggregate(&summaries),
        trials,
        oracle: Vec::new(),
    };
    match failure {
        Some(e) => Err((results, e)),
        None => Ok(results),
    }
}

/// Exhaustive reference fronts for each speed range, compared against the
/// trials already in `results`. Only feasible for tiny networks.
pub fn attach_oracle(doc: &ConfigDocument, results: &mut ExperimentResults) -> Result<()> {
    let adjacency = build_topology(&doc.network)?;
    let mut comparisons = Vec::new();
    for (i, &range) in doc.experiment.speed_ranges.iter().enumerate() {
        let mut per_speed = Vec::new();
        for t in results.trials.iter().filter(|t| t.summary.speed_range == range) {
            per_speed.push((t.summary.seed, t.summary.speed, t.front.clone()));
        }
        // Midpoint sampling shares one speed per range.
        let speed = per_speed
            .first()
            .map(|p| p.1)
            .unwrap_or_else(|| representative_speed(range, doc.experiment.speed_sampling, 0, i));
        let mobility = build_mobility(&doc.network, speed, &adjacency)?;
        let oracle = true_pareto_front(&doc.network, &mobility, doc.experiment.oracle_grid_step, DEFAULT_BUDGET)?;
        let compromise = best_compromise(&oracle.front_objectives())?;
        let trial_hypervolumes = per_speed
            .iter()
            .filter(|p| p.1 == speed)
            .map(|(seed, _, front)| Ok((*seed, hypervolume(front, oracle.reference)?)))
            .collect::<Result<Vec<_>>>()?;
        comparisons.push(OracleComparison {
            speed_range: range,
            oracle,
            compromise,
            trial_hypervolumes,
        });
    }
    results.oracle = comparisons;
    Ok(())
}
