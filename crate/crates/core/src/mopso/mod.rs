//! Multi-objective particle swarm optimizer with bounded local and global
//! non-dominated archives.

mod archive;
mod fuzzy;
mod swarm;

pub use archive::{cluster_reduce, select_guides, Entry, Normalizer, ParetoArchive};
pub use fuzzy::{best_compromise, fuzzy_membership, normalized_membership};
pub use swarm::{run, IterationRecord, MopsoOutcome, Particle, Swarm};

use rand::Rng;

use crate::assignment::ObjectivePair;
use crate::error::{Error, Result};

/// Something the swarm can minimize.
pub trait Problem: Sync {
    fn dimension(&self) -> usize;
    fn evaluate(&self, position: &[f64]) -> Result<ObjectivePair>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct MopsoParams {
    pub population: usize,
    pub iterations: usize,
    /// Number of intervals the search range is split into for `v_max`.
    pub intervals: usize,
    /// Personal (local-best) attraction weight.
    pub k1: f64,
    /// Social (global-best) attraction weight.
    pub k2: f64,
    pub local_archive_cap: usize,
    pub global_archive_cap: usize,
    pub initial_inertia: f64,
    pub inertia_decay: f64,
    pub x_min: Vec<f64>,
    pub x_max: Vec<f64>,
    pub seed: u64,
}

impl MopsoParams {
    /// Desk-scale defaults over `[0, 1]^num_params`.
    pub fn new(num_params: usize) -> Self {
        Self {
            population: 200,
            iterations: 100,
            intervals: 5,
            k1: 2.0,
            k2: 2.0,
            local_archive_cap: 5,
            global_archive_cap: 10,
            initial_inertia: 1.0,
            inertia_decay: 0.99,
            x_min: vec![0.0; num_params],
            x_max: vec![1.0; num_params],
            seed: 0,
        }
    }

    pub fn num_params(&self) -> usize {
        self.x_min.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::config("population", "must be at least 2"));
        }
        if self.iterations < 1 {
            return Err(Error::config("iterations", "must be at least 1"));
        }
        if self.intervals < 1 {
            return Err(Error::config("intervals", "must be at least 1"));
        }
        if self.local_archive_cap < 1 {
            return Err(Error::config("local_archive_cap", "must be at least 1"));
        }
        if self.global_archive_cap < 1 {
            return Err(Error::config("global_archive_cap", "must be at least 1"));
        }
        for (field, v) in [("k1", self.k1), ("k2", self.k2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(field, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !(self.initial_inertia.is_finite() && self.initial_inertia >= 0.0) {
            return Err(Error::config("initial_inertia", "must be finite and >= 0"));
        }
        if !(self.inertia_decay.is_finite() && self.inertia_decay > 0.0) {
            return Err(Error::config("inertia_decay", "must be finite and > 0"));
        }
        if self.x_min.len() != self.x_max.len() {
            return Err(Error::config("x_max", "bound vectors differ in length"));
        }
        if let Some(j) = (0..self.x_min.len())
            .find(|&j| !(self.x_min[j].is_finite() && self.x_max[j].is_finite() && self.x_min[j] <= self.x_max[j]))
        {
            return Err(Error::config(
                "x_min",
                format!("bounds of parameter {j} are invalid: [{}, {}]", self.x_min[j], self.x_max[j]),
            ));
        }
        Ok(())
    }
}

/// Pareto dominance for minimization.
pub fn dominates(a: &ObjectivePair, b: &ObjectivePair) -> bool {
    a.j1 <= b.j1 && a.j2 <= b.j2 && (a.j1 < b.j1 || a.j2 < b.j2)
}

/// `(x_max − x_min) / intervals` per parameter.
pub fn v_max(params: &MopsoParams) -> Vec<f64> {
    let intervals = params.intervals as f64;
    params
        .x_min
        .iter()
        .zip(&params.x_max)
        .map(|(lo, hi)| (hi - lo) / intervals)
        .collect()
}

/// One component of the velocity update with explicit random draws, clamped
/// to `[-v_max, v_max]`.
#[allow(clippy::too_many_arguments)]
pub fn velocity_component(
    inertia: f64,
    v_prev: f64,
    x: f64,
    local_best: f64,
    global_best: f64,
    k1: f64,
    k2: f64,
    r1: f64,
    r2: f64,
    v_max: f64,
) -> f64 {
    let v = inertia * v_prev + k1 * r1 * (local_best - x) + k2 * r2 * (global_best - x);
    v.clamp(-v_max, v_max)
}

/// Updates `velocity` in place, drawing fresh `rand₁`, `rand₂` per component.
#[allow(clippy::too_many_arguments)]
pub fn update_velocity<R: Rng + ?Sized>(
    velocity: &mut [f64],
    position: &[f64],
    local_best: &[f64],
    global_best: &[f64],
    inertia: f64,
    params: &MopsoParams,
    v_max: &[f64],
    rng: &mut R,
) {
    for j in 0..velocity.len() {
        let r1: f64 = rng.gen();
        let r2: f64 = rng.gen();
        velocity[j] = velocity_component(
            inertia,
            velocity[j],
            position[j],
            local_best[j],
            global_best[j],
            params.k1,
            params.k2,
            r1,
            r2,
            v_max[j],
        );
    }
}

/// `x ← x + v`, saturated at the bounds.
pub fn update_position(position: &mut [f64], velocity: &[f64], x_min: &[f64], x_max: &[f64]) {
    for j in 0..position.len() {
        position[j] = (position[j] + velocity[j]).clamp(x_min[j], x_max[j]);
    }
}

pub fn update_inertia(previous: f64, decay: f64) -> f64 {
    decay * previous
}
