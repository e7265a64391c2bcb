//! Bounded archives of mutually non-dominated solutions.
//!
//! Distances between archive members are measured in objective space after
//! min-max normalization over the set taking part in the comparison.

use crate::assignment::ObjectivePair;
use crate::error::{Error, Result};

use super::dominates;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub position: Vec<f64>,
    pub objectives: ObjectivePair,
}

impl Entry {
    pub fn new(position: Vec<f64>, objectives: ObjectivePair) -> Self {
        Self {
            position,
            objectives,
        }
    }
}

/// Per-objective min-max scaling. Flat objectives scale by one.
#[derive(Debug, Clone, Copy)]
pub struct Normalizer {
    min: [f64; 2],
    range: [f64; 2],
}

impl Normalizer {
    pub fn over<'a>(points: impl IntoIterator<Item = &'a ObjectivePair>) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for (i, v) in [p.j1, p.j2].into_iter().enumerate() {
                lo[i] = lo[i].min(v);
                hi[i] = hi[i].max(v);
            }
        }
        let range = |i: usize| {
            let r = hi[i] - lo[i];
            if r.is_finite() && r > 0.0 {
                r
            } else {
                1.0
            }
        };
        let min = |i: usize| if lo[i].is_finite() { lo[i] } else { 0.0 };
        Self {
            min: [min(0), min(1)],
            range: [range(0), range(1)],
        }
    }

    pub fn apply(&self, p: &ObjectivePair) -> [f64; 2] {
        [
            (p.j1 - self.min[0]) / self.range[0],
            (p.j2 - self.min[1]) / self.range[1],
        ]
    }

    pub fn distance(&self, a: &ObjectivePair, b: &ObjectivePair) -> f64 {
        let (a, b) = (self.apply(a), self.apply(b));
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoArchive {
    entries: Vec<Entry>,
    capacity: usize,
}

impl ParetoArchive {
    pub fn new(capacity: usize) -> Self {
        Self {
            entries: Vec::new(),
            capacity,
        }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn objectives(&self) -> Vec<ObjectivePair> {
        self.entries.iter().map(|e| e.objectives).collect()
    }

    /// Adds `candidate` unless an entry dominates it or already has the same
    /// objective values, and drops entries the candidate dominates. Does not
    /// enforce capacity.
    pub fn offer(&mut self, candidate: Entry) -> bool {
        let c = candidate.objectives;
        if self
            .entries
            .iter()
            .any(|e| dominates(&e.objectives, &c) || e.objectives == c)
        {
            return false;
        }
        self.entries.retain(|e| !dominates(&c, &e.objectives));
        self.entries.push(candidate);
        true
    }

    /// Offers `candidate` and clusters back down to capacity if needed.
    /// Returns whether the candidate is still a member afterwards.
    pub fn insert(&mut self, candidate: Entry) -> bool {
        if !self.offer(candidate) {
            return false;
        }
        let newest = self.entries.len() - 1;
        match self.truncate() {
            Some(kept) => kept.contains(&newest),
            None => true,
        }
    }

    /// Clusters down to capacity when over it. Returns the kept indices
    /// (relative to the pre-truncation order) if anything was removed.
    pub fn truncate(&mut self) -> Option<Vec<usize>> {
        if self.entries.len() <= self.capacity {
            return None;
        }
        let objectives = self.objectives();
        let kept = cluster_reduce(&objectives, self.capacity);
        let mut old = std::mem::take(&mut self.entries).into_iter().map(Some).collect::<Vec<_>>();
        self.entries = kept.iter().map(|&i| old[i].take().expect("unique index")).collect();
        Some(kept)
    }

    pub fn min_j1(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.objectives.j1).reduce(f64::min)
    }

    pub fn min_j2(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.objectives.j2).reduce(f64::min)
    }
}

/// Indices of the min-J¹ and min-J² points (ties broken on the other objective).
fn extreme_indices(points: &[ObjectivePair]) -> (usize, usize) {
    let key1 = |p: &ObjectivePair| (p.j1, p.j2);
    let key2 = |p: &ObjectivePair| (p.j2, p.j1);
    let argmin = |key: &dyn Fn(&ObjectivePair) -> (f64, f64)| {
        (0..points.len())
            .reduce(|best, i| {
                let (a, b) = (key(&points[i]), key(&points[best]));
                if a.0 < b.0 || (a.0 == b.0 && a.1 < b.1) {
                    i
                } else {
                    best
                }
            })
            .unwrap_or(0)
    };
    (argmin(&key1), argmin(&key2))
}

/// Average-linkage agglomerative clustering down to `target` clusters.
///
/// Returns the indices of the kept representatives in ascending order. A
/// cluster holding an extreme point (min J¹ or min J²) is represented by it;
/// other clusters keep the member nearest their centroid. Clusters holding
/// different extremes are never merged while `target >= 2`.
pub fn cluster_reduce(points: &[ObjectivePair], target: usize) -> Vec<usize> {
    let n = points.len();
    if n <= target {
        return (0..n).collect();
    }
    let target = target.max(1);
    let norm = Normalizer::over(points);
    let coords: Vec<[f64; 2]> = points.iter().map(|p| norm.apply(p)).collect();
    let dist = |a: usize, b: usize| {
        ((coords[a][0] - coords[b][0]).powi(2) + (coords[a][1] - coords[b][1]).powi(2)).sqrt()
    };
    let (ext1, ext2) = extreme_indices(points);
    let keep_apart = target >= 2 && ext1 != ext2;

    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut d: Vec<Vec<f64>> = (0..n).map(|a| (0..n).map(|b| dist(a, b)).collect()).collect();

    // Cluster positions currently holding each extreme.
    let (mut at1, mut at2) = (ext1, ext2);
    while clusters.len() > target {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                if keep_apart && ((a, b) == (at1, at2) || (a, b) == (at2, at1)) {
                    continue;
                }
                if best.is_none_or(|(_, _, v)| d[a][b] < v) {
                    best = Some((a, b, d[a][b]));
                }
            }
        }
        let (a, b, _) = best.expect("a mergeable pair exists while above target");
        let (na, nb) = (clusters[a].len() as f64, clusters[b].len() as f64);
        for k in 0..clusters.len() {
            if k != a && k != b {
                let merged = (na * d[a][k] + nb * d[b][k]) / (na + nb);
                d[a][k] = merged;
                d[k][a] = merged;
            }
        }
        d.remove(b);
        for row in d.iter_mut() {
            row.remove(b);
        }
        let moved = clusters.remove(b);
        clusters[a].extend(moved);
        for at in [&mut at1, &mut at2] {
            if *at == b {
                *at = a;
            } else if *at > b {
                *at -= 1;
            }
        }
    }

    let mut kept: Vec<usize> = clusters
        .iter()
        .map(|c| {
            if c.contains(&ext1) {
                return ext1;
            }
            if c.contains(&ext2) {
                return ext2;
            }
            let m = c.len() as f64;
            let cx = c.iter().map(|&i| coords[i][0]).sum::<f64>() / m;
            let cy = c.iter().map(|&i| coords[i][1]).sum::<f64>() / m;
            let mut members = c.clone();
            members.sort_unstable();
            members
                .into_iter()
                .map(|i| (i, (coords[i][0] - cx).powi(2) + (coords[i][1] - cy).powi(2)))
                .reduce(|best, cur| if cur.1 < best.1 { cur } else { best })
                .map(|(i, _)| i)
                .expect("clusters are non-empty")
        })
        .collect();
    kept.sort_unstable();
    kept
}

/// Local and global guide for one particle: the closest pair between the
/// two archives. Ties keep the first pair in local-major scan order.
pub fn select_guides(local: &ParetoArchive, global: &ParetoArchive) -> Result<(usize, usize, f64)> {
    if local.is_empty() || global.is_empty() {
        return Err(Error::Engine("guide selection on an empty archive".into()));
    }
    let norm = Normalizer::over(
        local
            .entries()
            .iter()
            .chain(global.entries())
            .map(|e| &e.objectives),
    );
    let mut best = (0, 0, f64::INFINITY);
    for (i, a) in local.entries().iter().enumerate() {
        for (j, b) in global.entries().iter().enumerate() {
            let d = norm.distance(&a.objectives, &b.objectives);
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    Ok(best)
}
