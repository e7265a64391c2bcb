//! Fuzzy best-compromise selection on a non-dominated front.

use crate::assignment::ObjectivePair;
use crate::error::{Error, Result};

/// Linear membership of each point in "good" for each objective: 1 at the
/// front's minimum, 0 at its maximum. A flat objective scores 1 everywhere.
pub fn fuzzy_membership(front: &[ObjectivePair]) -> Result<Vec<[f64; 2]>> {
    if front.is_empty() {
        return Err(Error::EmptyFront);
    }
    let column = |get: fn(&ObjectivePair) -> f64| -> Vec<f64> {
        let min = front.iter().map(get).fold(f64::INFINITY, f64::min);
        let max = front.iter().map(get).fold(f64::NEG_INFINITY, f64::max);
        front
            .iter()
            .map(|p| {
                let v = get(p);
                if v <= min {
                    1.0
                } else if v >= max {
                    0.0
                } else {
                    (max - v) / (max - min)
                }
            })
            .collect()
    };
    let m1 = column(|p| p.j1);
    let m2 = column(|p| p.j2);
    Ok(m1.into_iter().zip(m2).map(|(a, b)| [a, b]).collect())
}

/// Normalized membership `μ̄_m = Σ_c μ_m^c / Σ_m Σ_c μ_m^c`.
pub fn normalized_membership(front: &[ObjectivePair]) -> Result<Vec<f64>> {
    let mu = fuzzy_membership(front)?;
    let total: f64 = mu.iter().map(|m| m[0] + m[1]).sum();
    if total <= 0.0 {
        return Err(Error::DegenerateFront);
    }
    Ok(mu.iter().map(|m| (m[0] + m[1]) / total).collect())
}

/// Index of the point with the largest normalized membership; ties go to
/// the lowest index.
pub fn best_compromise(front: &[ObjectivePair]) -> Result<usize> {
    let scores = normalized_membership(front)?;
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    Ok(best)
}
