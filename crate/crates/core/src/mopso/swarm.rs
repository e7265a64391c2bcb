use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assignment::ObjectivePair;
use crate::error::{Error, Result};

use super::{
    best_compromise, select_guides, update_inertia, update_position, update_velocity, v_max, Entry,
    MopsoParams, ParetoArchive, Problem,
};

#[derive(Debug, Clone)]
pub struct Particle {
    position: Vec<f64>,
    velocity: Vec<f64>,
    objectives: ObjectivePair,
    local: ParetoArchive,
    local_best: Vec<f64>,
    global_best: Vec<f64>,
    rng: ChaCha8Rng,
}

impl Particle {
    pub fn position(&self) -> &[f64] {
        &self.position
    }

    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }

    pub fn objectives(&self) -> ObjectivePair {
        self.objectives
    }

    pub fn local_archive(&self) -> &ParetoArchive {
        &self.local
    }

    pub fn local_best(&self) -> &[f64] {
        &self.local_best
    }

    pub fn global_best(&self) -> &[f64] {
        &self.global_best
    }
}

/// Summary of the global archive after one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub min_j1: f64,
    pub min_j2: f64,
    pub archive_size: usize,
    pub archive: Vec<ObjectivePair>,
}

#[derive(Debug, Clone)]
pub struct MopsoOutcome {
    pub front: Vec<Entry>,
    /// Index into `front` of the best-compromise entry.
    pub compromise: usize,
    pub history: Vec<IterationRecord>,
}

impl MopsoOutcome {
    pub fn compromise_entry(&self) -> &Entry {
        &self.front[self.compromise]
    }

    pub fn front_objectives(&self) -> Vec<ObjectivePair> {
        self.front.iter().map(|e| e.objectives).collect()
    }
}

/// Swarm state between iterations. Each particle owns an RNG stream derived
/// from the seed and its index, so results do not depend on thread scheduling.
pub struct Swarm<'a, P: Problem> {
    problem: &'a P,
    params: MopsoParams,
    v_max: Vec<f64>,
    particles: Vec<Particle>,
    global: ParetoArchive,
    inertia: f64,
    iteration: usize,
    history: Vec<IterationRecord>,
}

impl<'a, P: Problem> Swarm<'a, P> {
    /// Random initialization, first archives and first guides.
    pub fn new(problem: &'a P, params: MopsoParams) -> Result<Self> {
        params.validate()?;
        if params.num_params() != problem.dimension() {
            return Err(Error::config(
                "x_min",
                format!(
                    "bounds cover {} parameters, problem has {}",
                    params.num_params(),
                    problem.dimension()
                ),
            ));
        }
        let v_max = v_max(&params);
        let particles = (0..params.population)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
                rng.set_stream(i as u64);
                let position: Vec<f64> = params
                    .x_min
                    .iter()
                    .zip(&params.x_max)
                    .map(|(&lo, &hi)| lo + (hi - lo) * rng.gen::<f64>())
                    .collect();
                let velocity: Vec<f64> = v_max
                    .iter()
                    .map(|&vm| vm * (2.0 * rng.gen::<f64>() - 1.0))
                    .collect();
                let objectives = problem.evaluate(&position)?;
                let mut local = ParetoArchive::new(params.local_archive_cap);
                local.offer(Entry::new(position.clone(), objectives));
                Ok(Particle {
                    local_best: position.clone(),
                    global_best: position.clone(),
                    position,
                    velocity,
                    objectives,
                    local,
                    rng,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut global = ParetoArchive::new(params.global_archive_cap);
        for p in &particles {
            global.offer(Entry::new(p.position.clone(), p.objectives));
        }
        global.truncate();

        let mut swarm = Self {
            problem,
            inertia: params.initial_inertia,
            params,
            v_max,
            particles,
            global,
            iteration: 1,
            history: Vec::new(),
        };
        swarm.refresh_guides()?;
        swarm.record();
        Ok(swarm)
    }

    pub fn params(&self) -> &MopsoParams {
        &self.params
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn global_archive(&self) -> &ParetoArchive {
        &self.global
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn v_max(&self) -> &[f64] {
        &self.v_max
    }

    pub fn history(&self) -> &[IterationRecord] {
        &self.history
    }

    pub fn is_finished(&self) -> bool {
        self.iteration >= self.params.iterations
    }

    /// One pass of inertia, velocity, position, local archive, global archive
    /// and guide updates.
    pub fn step(&mut self) -> Result<()> {
        self.iteration += 1;
        self.inertia = update_inertia(self.inertia, self.params.inertia_decay);

        let (problem, params, v_max, inertia) = (self.problem, &self.params, &self.v_max, self.inertia);
        let fresh = self
            .particles
            .par_iter_mut()
            .map(|p| {
                update_velocity(
                    &mut p.velocity,
                    &p.position,
                    &p.local_best,
                    &p.global_best,
                    inertia,
                    params,
                    v_max,
                    &mut p.rng,
                );
                update_position(&mut p.position, &p.velocity, &params.x_min, &params.x_max);
                p.objectives = problem.evaluate(&p.position)?;
                let entry = Entry::new(p.position.clone(), p.objectives);
                Ok(p.local.insert(entry.clone()).then_some(entry))
            })
            .collect::<Result<Vec<_>>>()?;

        // Older local members were offered on earlier iterations.
        for entry in fresh.into_iter().flatten() {
            self.global.offer(entry);
        }
        self.global.truncate();

        self.refresh_guides()?;
        self.record();
        Ok(())
    }

    fn refresh_guides(&mut self) -> Result<()> {
        let global = &self.global;
        self.particles.par_iter_mut().try_for_each(|p| {
            let (i, j, _) = select_guides(&p.local, global)?;
            p.local_best.clone_from(&p.local.entries()[i].position);
            p.global_best.clone_from(&global.entries()[j].position);
            Ok(())
        })
    }

    fn record(&mut self) {
        self.history.push(IterationRecord {
            iteration: self.iteration,
            min_j1: self.global.min_j1().unwrap_or(f64::NAN),
            min_j2: self.global.min_j2().unwrap_or(f64::NAN),
            archive_size: self.global.len(),
            archive: self.global.objectives(),
        });
    }

    pub fn finish(self) -> Result<MopsoOutcome> {
        let front = self.global.entries().to_vec();
        let objectives: Vec<_> = front.iter().map(|e| e.objectives).collect();
        let compromise = best_compromise(&objectives)?;
        Ok(MopsoOutcome {
            front,
            compromise,
            history: self.history,
        })
    }
}

/// Runs the swarm for `params.iterations` iterations (initialization counts
/// as the first) and extracts the best compromise of the final front.
pub fn run<P: Problem>(problem: &P, params: MopsoParams) -> Result<MopsoOutcome> {
    let mut swarm = Swarm::new(problem, params)?;
    while !swarm.is_finished() {
        swarm.step()?;
    }
    swarm.finish()
}
