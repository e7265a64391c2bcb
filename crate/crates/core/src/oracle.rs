//! Exhaustive ground truth for small instances, a weighted-sum baseline and
//! the exact two-objective hypervolume.
//!
//! The usage fractions are continuous, so enumeration walks a simplex grid
//! over each list's members: with step `1/m`, every composition of `m` into
//! `list_size` non-negative parts is one usage row.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assignment::{evaluate, AssignmentSolution, ObjectivePair, TalMembership, UsageFractions};
use crate::error::{Error, Result};
use crate::mopso::dominates;
use crate::network::{MobilityModel, NetworkConfig};

/// Default cap on the number of evaluated candidates.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Exact 2-D hypervolume dominated by `front` and bounded by `reference`.
/// Dominated and duplicate points contribute nothing.
pub fn hypervolume(front: &[ObjectivePair], reference: ObjectivePair) -> Result<f64> {
    if let Some(p) = front
        .iter()
        .find(|p| !(p.j1 <= reference.j1 && p.j2 <= reference.j2))
    {
        return Err(Error::OutsideReference {
            j1: p.j1,
            j2: p.j2,
            ref_j1: reference.j1,
            ref_j2: reference.j2,
        });
    }
    let mut pts = front.to_vec();
    pts.sort_by(|a, b| a.j1.total_cmp(&b.j1).then(a.j2.total_cmp(&b.j2)));
    let mut volume = 0.0;
    let mut ceiling = reference.j2;
    for p in pts {
        if p.j2 < ceiling {
            volume += (reference.j1 - p.j1) * (ceiling - p.j2);
            ceiling = p.j2;
        }
    }
    Ok(volume)
}

/// Every candidate row for a single list: member set plus usage over it.
#[derive(Debug, Clone)]
struct ListOption {
    members: Vec<usize>,
    usage: Vec<f64>,
}

/// The enumerable search space of one instance.
#[derive(Debug, Clone)]
pub struct GridSpace {
    num_cells: usize,
    num_lists: usize,
    options: Vec<ListOption>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Compositions of `total` into `parts` non-negative integers, lexicographic
/// with the first part largest-first.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn grid_steps(step: f64) -> Result<usize> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(Error::config("sigma_grid_step", format!("must lie in (0, 1], got {step}")));
    }
    let m = (1.0 / step).round();
    if (m * step - 1.0).abs() > 1e-9 {
        return Err(Error::config("sigma_grid_step", format!("1/{step} is not an integer")));
    }
    Ok(m as usize)
}

impl GridSpace {
    /// Number of candidates `(C(N, n̄) · C(m + n̄ − 1, n̄ − 1))^L`, saturating.
    pub fn size_estimate(config: &NetworkConfig, step: f64) -> Result<u128> {
        config.check_dimensions()?;
        let m = grid_steps(step)? as u128;
        let (n, k) = (config.num_cells as u128, config.list_size as u128);
        let per_list = binomial(n, k).saturating_mul(binomial(m + k - 1, k - 1));
        Ok((0..config.num_lists).fold(1u128, |acc, _| acc.saturating_mul(per_list)))
    }

    pub fn new(config: &NetworkConfig, step: f64, budget: u128) -> Result<Self> {
        let required = Self::size_estimate(config, step)?;
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        let m = grid_steps(step)?;
        let grid = compositions(m, config.list_size);
        let mut options = Vec::new();
        for members in subsets(config.num_cells, config.list_size) {
            for parts in &grid {
                options.push(ListOption {
                    members: members.clone(),
                    usage: parts.iter().map(|&p| p as f64 / m as f64).collect(),
                });
            }
        }
        Ok(Self {
            num_cells: config.num_cells,
            num_lists: config.num_lists,
            options,
        })
    }

    pub fn options_per_list(&self) -> usize {
        self.options.len()
    }

    pub fn len(&self) -> u128 {
        (self.options.len() as u128).pow(self.num_lists as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    /// Solution built from one option index per list.
    pub fn solution(&self, choice: &[usize]) -> AssignmentSolution {
        let n = self.num_cells;
        let mut memberships = Vec::with_capacity(choice.len());
        let mut sigma = Vec::with_capacity(choice.len());
        for (l, &c) in choice.iter().enumerate() {
            let opt = &self.options[c];
            memberships.push(TalMembership::from_cells(l, n, &opt.members));
            let mut row = vec![0.0; n];
            for (&k, &s) in opt.members.iter().zip(&opt.usage) {
                row[k] = s;
            }
            sigma.push(row);
        }
        AssignmentSolution {
            memberships,
            usage: UsageFractions { sigma },
            mme_flags: vec![true; choice.len()],
        }
    }

    /// Visits every candidate whose first list uses option `first`, in
    /// mixed-radix order over the remaining lists.
    fn for_each_with_first(&self, first: usize, mut visit: impl FnMut(&[usize])) {
        let mut choice = vec![0usize; self.num_lists];
        choice[0] = first;
        loop {
            visit(&choice);
            let mut l = self.num_lists - 1;
            loop {
                if l == 0 {
                    return;
                }
                choice[l] += 1;
                if choice[l] < self.options.len() {
                    break;
                }
                choice[l] = 0;
                l -= 1;
            }
        }
    }

    /// Every candidate solution in enumeration order.
    pub fn solutions(&self) -> impl Iterator<Item = AssignmentSolution> + '_ {
        (0..self.options.len()).flat_map(move |first| {
            let mut batch = Vec::new();
            self.for_each_with_first(first, |c| batch.push(self.solution(c)));
            batch
        })
    }
}

/// Non-dominated set keeping the first of equal objective vectors.
#[derive(Debug, Clone, Default)]
struct FrontBuilder {
    points: Vec<(Vec<usize>, ObjectivePair)>,
    lo: [f64; 2],
    hi: [f64; 2],
    seen: u128,
}

impl FrontBuilder {
    fn new() -> Self {
        Self {
            points: Vec::new(),
            lo: [f64::INFINITY; 2],
            hi: [f64::NEG_INFINITY; 2],
            seen: 0,
        }
    }

    fn offer(&mut self, choice: &[usize], p: ObjectivePair) {
        self.seen += 1;
        self.lo = [self.lo[0].min(p.j1), self.lo[1].min(p.j2)];
        self.hi = [self.hi[0].max(p.j1), self.hi[1].max(p.j2)];
        if self
            .points
            .iter()
            .any(|(_, q)| dominates(q, &p) || *q == p)
        {
            return;
        }
        self.points.retain(|(_, q)| !dominates(&p, q));
        self.points.push((choice.to_vec(), p));
    }

    fn merge(mut self, other: FrontBuilder) -> Self {
        let seen = self.seen + other.seen;
        for (c, p) in other.points {
            self.offer(&c, p);
        }
        self.seen = seen;
        self.lo = [self.lo[0].min(other.lo[0]), self.lo[1].min(other.lo[1])];
        self.hi = [self.hi[0].max(other.hi[0]), self.hi[1].max(other.hi[1])];
        self
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Non-dominated candidates sorted by J¹.
    pub true_front: Vec<(AssignmentSolution, ObjectivePair)>,
    pub hypervolume: f64,
    /// `(1.1 · max J¹, 1.1 · max J²)` over every enumerated candidate.
    pub reference: ObjectivePair,
    /// Componentwise minimum over every enumerated candidate.
    pub ideal: ObjectivePair,
    /// Componentwise maximum over every enumerated candidate.
    pub worst: ObjectivePair,
    pub grid_step: f64,
    pub evaluations: u128,
}

impl OracleResult {
    pub fn front_objectives(&self) -> Vec<ObjectivePair> {
        self.true_front.iter().map(|(_, p)| *p).collect()
    }
}

pub fn true_pareto_front(
    config: &NetworkConfig,
    mobility: &MobilityModel,
    sigma_grid_step: f64,
    budget: u128,
) -> Result<OracleResult> {
    let space = GridSpace::new(config, sigma_grid_step, budget)?;
    let partials: Vec<FrontBuilder> = (0..space.options_per_list())
        .into_par_iter()
        .map(|first| {
            let mut fb = FrontBuilder::new();
            space.for_each_with_first(first, |choice| {
                let sol = space.solution(choice);
                fb.offer(choice, evaluate(&sol, mobility, config));
            });
            fb
        })
        .collect();
    let merged = partials
        .into_iter()
        .fold(FrontBuilder::new(), FrontBuilder::merge);

    let mut true_front: Vec<(AssignmentSolution, ObjectivePair)> = merged
        .points
        .iter()
        .map(|(c, p)| (space.solution(c), *p))
        .collect();
    true_front.sort_by(|a, b| a.1.j1.total_cmp(&b.1.j1));
    let reference = ObjectivePair::new(1.1 * merged.hi[0], 1.1 * merged.hi[1]);
    let objectives: Vec<_> = true_front.iter().map(|(_, p)| *p).collect();
    Ok(OracleResult {
        hypervolume: hypervolume(&objectives, reference)?,
        true_front,
        reference,
        ideal: ObjectivePair::new(merged.lo[0], merged.lo[1]),
        worst: ObjectivePair::new(merged.hi[0], merged.hi[1]),
        grid_step: sigma_grid_step,
        evaluations: merged.seen,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    Exhaustive,
    HillClimb,
}

#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub solution: AssignmentSolution,
    pub objectives: ObjectivePair,
    pub method: BaselineMethod,
    /// Why the fallback was used, when it was.
    pub note: Option<String>,
}

struct Scaler {
    lo: [f64; 2],
    range: [f64; 2],
    weight: f64,
}

impl Scaler {
    fn new(lo: [f64; 2], hi: [f64; 2], weight: f64) -> Self {
        let r = |i: usize| {
            let d = hi[i] - lo[i];
            if d > 0.0 {
                d
            } else {
                1.0
            }
        };
        Self {
            lo,
            range: [r(0), r(1)],
            weight,
        }
    }

    fn score(&self, p: &ObjectivePair) -> f64 {
        self.weight * (p.j1 - self.lo[0]) / self.range[0]
            + (1.0 - self.weight) * (p.j2 - self.lo[1]) / self.range[1]
    }

    /// Strictly better score, or an equal score that dominates.
    fn improves(&self, cand: &ObjectivePair, best: &ObjectivePair) -> bool {
        let (a, b) = (self.score(cand), self.score(best));
        a < b - 1e-12 || ((a - b).abs() <= 1e-12 && dominates(cand, best))
    }
}

/// Minimizes `w·Ĵ¹ + (1 − w)·Ĵ²` with objectives min-max normalized over the
/// search space's extremes. Enumerates the grid when it fits the budget and
/// falls back to a seeded swap hill-climb otherwise.
pub fn weighted_sum_baseline(
    config: &NetworkConfig,
    mobility: &MobilityModel,
    weight: f64,
    sigma_grid_step: f64,
    budget: u128,
) -> Result<BaselineResult> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::config("weight", format!("must lie in [0, 1], got {weight}")));
    }
    match GridSpace::new(config, sigma_grid_step, budget) {
        Ok(space) => exhaustive_baseline(config, mobility, weight, &space),
        Err(Error::BudgetExceeded { required, budget }) => {
            let mut res = hill_climb_baseline(config, mobility, weight)?;
            res.note = Some(format!(
                "enumeration needs {required} evaluations (budget {budget}); used swap hill-climb"
            ));
            Ok(res)
        }
        Err(e) => Err(e),
    }
}

fn exhaustive_baseline(
    config: &NetworkConfig,
    mobility: &MobilityModel,
    weight: f64,
    space: &GridSpace,
) -> Result<BaselineResult> {
    let scan = |first: usize| {
        let mut fb = FrontBuilder::new();
        space.for_each_with_first(first, |c| {
            fb.offer(c, evaluate(&space.solution(c), mobility, config));
        });
        fb
    };
    let extremes = (0..space.options_per_list())
        .into_par_iter()
        .map(scan)
        .collect::<Vec<_>>()
        .into_iter()
        .fold(FrontBuilder::new(), FrontBuilder::merge);
    let scaler = Scaler::new(extremes.lo, extremes.hi, weight);
    // The weighted optimum is always a front member.
    let mut best: Option<&(Vec<usize>, ObjectivePair)> = None;
    for cand in &extremes.points {
        if best.is_none_or(|b| scaler.improves(&cand.1, &b.1)) {
            best = Some(cand);
        }
    }
    let (choice, objectives) = best.ok_or(Error::EmptyFront)?;
    Ok(BaselineResult {
        solution: space.solution(choice),
        objectives: *objectives,
        method: BaselineMethod::Exhaustive,
        note: None,
    })
}

/// Linear J¹ coefficient of `σ[l][k]` for a member `k` of list `l`.
fn usage_coefficient(config: &NetworkConfig, mobility: &MobilityModel, membership: &TalMembership, k: usize) -> f64 {
    let leaving: f64 = mobility
        .outgoing(k)
        .iter()
        .filter(|&&(n, _)| !membership.contains(n))
        .map(|&(_, p)| p)
        .sum();
    let tau = config.tau_cost * config.relocation_cost * config.users(k) * leaving;
    let paging = config.paging_rate * config.paging_cost * config.users(k) * membership.size() as f64;
    tau + paging
}

/// Usage rows that minimize J¹ for fixed memberships: J¹ is linear in each
/// list's usage row, so the optimum sits on a simplex vertex.
fn best_usage(config: &NetworkConfig, mobility: &MobilityModel, memberships: &[TalMembership]) -> Vec<Vec<f64>> {
    memberships
        .iter()
        .map(|m| {
            let mut row = vec![0.0; config.num_cells];
            let best = m
                .cells()
                .into_iter()
                .map(|k| (k, usage_coefficient(config, mobility, m, k)))
                .reduce(|a, b| if b.1 < a.1 { b } else { a });
            if let Some((k, _)) = best {
                row[k] = 1.0;
            }
            row
        })
        .collect()
}

fn with_best_usage(config: &NetworkConfig, mobility: &MobilityModel, memberships: Vec<TalMembership>) -> AssignmentSolution {
    let sigma = best_usage(config, mobility, &memberships);
    AssignmentSolution {
        mme_flags: vec![true; memberships.len()],
        memberships,
        usage: UsageFractions { sigma },
    }
}

const HILL_CLIMB_SAMPLES: usize = 2000;
const HILL_CLIMB_SEED: u64 = 0x7a1;
const HILL_CLIMB_MAX_PASSES: usize = 200;

fn random_memberships<R: Rng>(config: &NetworkConfig, rng: &mut R) -> Vec<TalMembership> {
    (0..config.num_lists)
        .map(|l| {
            let mut cells: Vec<usize> = (0..config.num_cells).collect();
            for i in 0..config.list_size {
                let j = rng.gen_range(i..cells.len());
                cells.swap(i, j);
            }
            TalMembership::from_cells(l, config.num_cells, &cells[..config.list_size])
        })
        .collect()
}

fn hill_climb_baseline(config: &NetworkConfig, mobility: &MobilityModel, weight: f64) -> Result<BaselineResult> {
    config.check_dimensions()?;
    let mut rng = ChaCha8Rng::seed_from_u64(HILL_CLIMB_SEED);
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for _ in 0..HILL_CLIMB_SAMPLES {
        let memberships = random_memberships(config, &mut rng);
        // Both vertex-optimal and uniform usage, to bracket J¹.
        let tuned = with_best_usage(config, mobility, memberships.clone());
        let uniform = AssignmentSolution {
            usage: UsageFractions {
                sigma: memberships
                    .iter()
                    .map(|m| {
                        (0..config.num_cells)
                            .map(|k| if m.contains(k) { 1.0 / config.list_size as f64 } else { 0.0 })
                            .collect()
                    })
                    .collect(),
            },
            mme_flags: vec![true; memberships.len()],
            memberships,
        };
        for sol in [tuned, uniform] {
            let p = evaluate(&sol, mobility, config);
            lo = [lo[0].min(p.j1), lo[1].min(p.j2)];
            hi = [hi[0].max(p.j1), hi[1].max(p.j2)];
        }
    }
    let scaler = Scaler::new(lo, hi, weight);

    let mut current = with_best_usage(config, mobility, random_memberships(config, &mut rng));
    let mut current_obj = evaluate(&current, mobility, config);
    for _ in 0..HILL_CLIMB_MAX_PASSES {
        let mut improved = false;
        for l in 0..config.num_lists {
            let members = current.memberships[l].cells();
            let outside: Vec<usize> = (0..config.num_cells)
                .filter(|&k| !current.memberships[l].contains(k))
                .collect();
            'swap: for &a in &members {
                for &b in &outside {
                    let mut memberships = current.memberships.clone();
                    memberships[l].members[a] = false;
                    memberships[l].members[b] = true;
                    let cand = with_best_usage(config, mobility, memberships);
                    let obj = evaluate(&cand, mobility, config);
                    if scaler.improves(&obj, &current_obj) {
                        current = cand;
                        current_obj = obj;
                        improved = true;
                        break 'swap;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(BaselineResult {
        solution: current,
        objectives: current_obj,
        method: BaselineMethod::HillClimb,
        note: None,
    })
}
