//! Decoding of relaxed particle positions into tracking area list plans, and
//! the two cost objectives evaluated on them.
//!
//! A position has `2·L·N` entries. The first `L·N` (list-major) rank cells for
//! membership; the top `list_size` entries of each list become members, ties
//! going to the lower cell index. The second `L·N` entries are raw usage
//! weights, masked to members and normalized so each list's weights sum to
//! one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{MobilityModel, NetworkConfig};

/// Per-UE power drawn by one tracking area update, in mW.
pub const TAU_POWER_MW: f64 = 10.0;

const USAGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePair {
    /// TAU plus paging signaling cost.
    pub j1: f64,
    /// Inter-list handover cost.
    pub j2: f64,
}

impl ObjectivePair {
    pub fn new(j1: f64, j2: f64) -> Self {
        Self { j1, j2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TalMembership {
    pub list: usize,
    pub members: Vec<bool>,
}

impl TalMembership {
    pub fn from_cells(list: usize, num_cells: usize, cells: &[usize]) -> Self {
        let mut members = vec![false; num_cells];
        for &c in cells {
            members[c] = true;
        }
        Self { list, members }
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.members[cell]
    }

    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn cells(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&k| self.members[k]).collect()
    }

    /// `C[k][n] = members[k] && members[n]`, diagonal included.
    pub fn expanded(&self) -> Vec<Vec<bool>> {
        self.members
            .iter()
            .map(|&a| self.members.iter().map(|&b| a && b).collect())
            .collect()
    }

    /// Off-diagonal ones in the expanded matrix.
    pub fn offdiag_count(&self) -> usize {
        let s = self.size();
        s * s.saturating_sub(1)
    }
}

/// Usage fractions `sigma[l][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageFractions {
    pub sigma: Vec<Vec<f64>>,
}

impl UsageFractions {
    pub fn get(&self, list: usize, cell: usize) -> f64 {
        self.sigma[list][cell]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentSolution {
    pub memberships: Vec<TalMembership>,
    pub usage: UsageFractions,
    pub mme_flags: Vec<bool>,
}

impl AssignmentSolution {
    /// Builds a solution from explicit member sets and usage rows; every
    /// list is attached to its own MME.
    pub fn new(num_cells: usize, lists: &[Vec<usize>], sigma: Vec<Vec<f64>>) -> Self {
        let memberships = lists
            .iter()
            .enumerate()
            .map(|(l, cells)| TalMembership::from_cells(l, num_cells, cells))
            .collect();
        Self {
            memberships,
            mme_flags: vec![true; lists.len()],
            usage: UsageFractions { sigma },
        }
    }

    pub fn num_lists(&self) -> usize {
        self.memberships.len()
    }

    fn mme(&self, list: usize) -> f64 {
        if self.mme_flags[list] {
            1.0
        } else {
            0.0
        }
    }

    fn co_member(&self, list: usize, k: usize, n: usize) -> bool {
        let m = &self.memberships[list];
        m.contains(k) && m.contains(n)
    }
}

pub fn decode(position: &[f64], config: &NetworkConfig) -> Result<AssignmentSolution> {
    config.check_dimensions()?;
    let (n, l) = (config.num_cells, config.num_lists);
    let expected = 2 * l * n;
    if position.len() != expected {
        return Err(Error::Encoding(format!(
            "position has {} entries, expected 2·L·N = {expected}",
            position.len()
        )));
    }
    if let Some(bad) = position.iter().position(|v| !v.is_finite()) {
        return Err(Error::Encoding(format!("entry {bad} is not finite")));
    }
    let (ranks, weights) = position.split_at(l * n);
    if let Some(bad) = weights.iter().position(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::Encoding(format!(
            "usage weight {} = {} outside [0, 1]",
            l * n + bad,
            weights[bad]
        )));
    }

    let mut memberships = Vec::with_capacity(l);
    let mut sigma = Vec::with_capacity(l);
    let mut order: Vec<usize> = (0..n).collect();
    for list in 0..l {
        let rank = &ranks[list * n..(list + 1) * n];
        order.sort_by(|&a, &b| rank[b].total_cmp(&rank[a]).then(a.cmp(&b)));
        let mut members = vec![false; n];
        for &k in &order[..config.list_size] {
            members[k] = true;
        }

        let raw = &weights[list * n..(list + 1) * n];
        let mut row: Vec<f64> = (0..n)
            .map(|k| if members[k] { raw[k] } else { 0.0 })
            .collect();
        let total: f64 = row.iter().sum();
        if total > 0.0 {
            row.iter_mut().for_each(|s| *s /= total);
        } else {
            let uniform = 1.0 / config.list_size as f64;
            for k in 0..n {
                if members[k] {
                    row[k] = uniform;
                }
            }
        }
        memberships.push(TalMembership { list, members });
        sigma.push(row);
    }
    Ok(AssignmentSolution {
        memberships,
        usage: UsageFractions { sigma },
        mme_flags: vec![true; l],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    /// Exactly `list_size` members per list.
    ListCardinality,
    /// Off-diagonal one-count of each expanded list matrix at most `max_offdiag`.
    MaxListSize,
    /// Expanded list matrices are symmetric.
    Symmetry,
    /// Usage of every member column sums to one per list.
    Usage,
    /// Usage is zero outside a list.
    Masking,
    /// Usage fractions lie in [0, 1].
    UsageBounds,
    /// Every list is served by its own MME.
    MmeAssignment,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintCheck {
    pub kind: ConstraintKind,
    pub passed: bool,
    /// Largest violation found; zero when the constraint holds.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ViolationReport {
    pub fn is_feasible(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, kind: ConstraintKind) -> &ConstraintCheck {
        self.checks
            .iter()
            .find(|c| c.kind == kind)
            .expect("every constraint kind is reported")
    }

    pub fn violations(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn check_constraints(sol: &AssignmentSolution, config: &NetworkConfig) -> ViolationReport {
    let n = config.num_cells;
    let mut cardinality = 0.0f64;
    let mut size_excess = 0.0f64;
    let mut asymmetry = 0.0f64;
    let mut usage_gap = 0.0f64;
    let mut masked = 0.0f64;
    let mut bounds = 0.0f64;
    let mut mme = 0.0f64;

    for (l, membership) in sol.memberships.iter().enumerate() {
        let c = membership.expanded();
        cardinality = cardinality.max(membership.size().abs_diff(config.list_size) as f64);
        let offdiag = (0..n)
            .flat_map(|k| (0..n).map(move |m| (k, m)))
            .filter(|&(k, m)| k != m && c[k][m])
            .count();
        size_excess = size_excess.max(offdiag.saturating_sub(config.max_offdiag) as f64);
        for k in 0..n {
            for m in 0..n {
                if c[k][m] != c[m][k] {
                    asymmetry = 1.0;
                }
            }
        }
        let sigma = &sol.usage.sigma[l];
        for col in (0..n).filter(|&m| c[m][m]) {
            let total: f64 = (0..n).filter(|&k| c[k][col]).map(|k| sigma[k]).sum();
            usage_gap = usage_gap.max((total - 1.0).abs());
        }
        for k in 0..n {
            if !membership.contains(k) {
                masked = masked.max(sigma[k].abs());
            }
            let s = sigma[k];
            bounds = bounds.max((-s).max(s - 1.0).max(0.0));
        }
        if !sol.mme_flags[l] {
            mme = 1.0;
        }
    }

    let check = |kind, magnitude: f64, tol: f64| ConstraintCheck {
        kind,
        passed: magnitude <= tol,
        magnitude,
    };
    ViolationReport {
        checks: vec![
            check(ConstraintKind::ListCardinality, cardinality, 0.0),
            check(ConstraintKind::MaxListSize, size_excess, 0.0),
            check(ConstraintKind::Symmetry, asymmetry, 0.0),
            check(ConstraintKind::Usage, usage_gap, USAGE_TOLERANCE),
            check(ConstraintKind::Masking, masked, 0.0),
            check(ConstraintKind::UsageBounds, bounds, 0.0),
            check(ConstraintKind::MmeAssignment, mme, 0.0),
        ],
    }
}

/// Expected TAU events per unit time from cell `k`, before cost weighting:
/// `UE_k · Σ_n Prob[k][n] · Σ_l O^l · σ[l][k] · (1 − C^l[k][n])`.
fn tau_event_rate(sol: &AssignmentSolution, mobility: &MobilityModel, config: &NetworkConfig, k: usize) -> f64 {
    let mut rate = 0.0;
    for &(n, p) in mobility.outgoing(k) {
        let leaving: f64 = (0..sol.num_lists())
            .filter(|&l| !sol.co_member(l, k, n))
            .map(|l| sol.mme(l) * sol.usage.get(l, k))
            .sum();
        rate += p * leaving;
    }
    config.users(k) * rate
}

pub fn tau_cost(sol: &AssignmentSolution, mobility: &MobilityModel, config: &NetworkConfig, k: usize) -> f64 {
    config.tau_cost * config.relocation_cost * tau_event_rate(sol, mobility, config, k)
}

pub fn paging_cost(sol: &AssignmentSolution, config: &NetworkConfig, k: usize) -> f64 {
    paging_with_sums(sol, config, &list_paging_sums(sol, config), k)
}

/// `Σ_m UE_m · σ[l][m]` for every list.
fn list_paging_sums(sol: &AssignmentSolution, config: &NetworkConfig) -> Vec<f64> {
    sol.usage
        .sigma
        .iter()
        .map(|row| row.iter().enumerate().map(|(m, s)| config.users(m) * s).sum())
        .collect()
}

fn paging_with_sums(sol: &AssignmentSolution, config: &NetworkConfig, sums: &[f64], k: usize) -> f64 {
    let mut total = 0.0;
    for (l, &sum) in sums.iter().enumerate() {
        let own = config.users(k) * sol.usage.get(l, k);
        total += own;
        // Co-members' share; usage is zero outside the list.
        if sol.memberships[l].contains(k) {
            total += sum - own;
        }
    }
    config.paging_rate * config.paging_cost * total
}

pub fn handover_cost(sol: &AssignmentSolution, mobility: &MobilityModel, config: &NetworkConfig, k: usize) -> f64 {
    let mut total = 0.0;
    for &(n, p) in mobility.outgoing(k) {
        let split = (0..sol.num_lists())
            .filter(|&l| !sol.co_member(l, k, n))
            .count();
        total += p * split as f64;
    }
    config.users(k) * total
}

pub fn objective1(sol: &AssignmentSolution, mobility: &MobilityModel, config: &NetworkConfig) -> f64 {
    let sums = list_paging_sums(sol, config);
    (0..config.num_cells)
        .map(|k| tau_cost(sol, mobility, config, k) + paging_with_sums(sol, config, &sums, k))
        .sum()
}

pub fn objective2(sol: &AssignmentSolution, mobility: &MobilityModel, config: &NetworkConfig) -> f64 {
    (0..config.num_cells)
        .map(|k| handover_cost(sol, mobility, config, k))
        .sum()
}

pub fn evaluate(sol: &AssignmentSolution, mobility: &MobilityModel, config: &NetworkConfig) -> ObjectivePair {
    ObjectivePair::new(
        objective1(sol, mobility, config),
        objective2(sol, mobility, config),
    )
}

/// Network-average per-UE power spent on TAU signaling, in mW.
pub fn power_consumption(sol: &AssignmentSolution, mobility: &MobilityModel, config: &NetworkConfig) -> f64 {
    let users = config.users_per_cell.total(config.num_cells);
    if users == 0.0 {
        return 0.0;
    }
    let events: f64 = (0..config.num_cells)
        .map(|k| tau_event_rate(sol, mobility, config, k))
        .sum();
    TAU_POWER_MW * events / users
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{build_topology, NetworkConfig};

    fn tiny() -> NetworkConfig {
        NetworkConfig::uniform(2, 2, 1, 2, 100.0)
    }

    fn hand_solution() -> AssignmentSolution {
        AssignmentSolution::new(4, &[vec![0, 2]], vec![vec![0.4, 0.0, 0.6, 0.0]])
    }

    fn hand_mobility(cfg: &NetworkConfig) -> MobilityModel {
        let mut prob = vec![vec![0.0; 4]; 4];
        prob[0][1] = 0.1;
        prob[0][2] = 0.1;
        MobilityModel::from_matrix(prob, build_topology(cfg).unwrap()).unwrap()
    }

    #[test]
    fn decode_masks_and_normalizes() {
        let cfg = tiny();
        let sol = decode(&[1.0, 0.0, 1.0, 0.0, 0.4, 0.9, 0.6, 0.2], &cfg).unwrap();
        assert_eq!(sol.memberships[0].cells(), vec![0, 2]);
        let s = &sol.usage.sigma[0];
        assert!((s[0] - 0.4).abs() < 1e-12 && (s[2] - 0.6).abs() < 1e-12);
        assert_eq!((s[1], s[3]), (0.0, 0.0));
    }

    #[test]
    fn decode_uniform_fallback() {
        let sol = decode(&[1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0], &tiny()).unwrap();
        assert_eq!(sol.usage.sigma[0], vec![0.5, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn decode_tie_break_prefers_lower_index() {
        let cfg = tiny();
        let a = decode(&[0.9, 0.9, 0.1, 0.1, 0.5, 0.5, 0.5, 0.5], &cfg).unwrap();
        assert_eq!(a.memberships[0].cells(), vec![0, 1]);
        let b = decode(&[0.9, 0.9, 0.9, 0.1, 0.5, 0.5, 0.5, 0.5], &cfg).unwrap();
        assert_eq!(b.memberships[0].cells(), vec![0, 1]);
    }

    #[test]
    fn decode_rejects_bad_length() {
        assert!(matches!(decode(&[0.5; 7], &tiny()), Err(Error::Encoding(_))));
    }

    #[test]
    fn decoded_solution_is_feasible() {
        let cfg = tiny();
        let sol = decode(&[0.3, 0.8, 0.1, 0.7, 0.2, 0.0, 0.9, 0.4], &cfg).unwrap();
        assert!(check_constraints(&sol, &cfg).is_feasible());
    }

    #[test]
    fn usage_deficit_is_reported() {
        let cfg = tiny();
        let sol = AssignmentSolution::new(4, &[vec![0, 2]], vec![vec![0.3, 0.0, 0.6, 0.0]]);
        let report = check_constraints(&sol, &cfg);
        let usage = report.get(ConstraintKind::Usage);
        assert!(!usage.passed);
        assert!((usage.magnitude - 0.1).abs() < 1e-12);
    }

    #[test]
    fn oversized_list_is_reported() {
        let cfg = tiny();
        let sol = AssignmentSolution::new(4, &[vec![0, 1, 2]], vec![vec![0.2, 0.3, 0.5, 0.0]]);
        let report = check_constraints(&sol, &cfg);
        assert!(!report.get(ConstraintKind::MaxListSize).passed);
        assert_eq!(report.get(ConstraintKind::MaxListSize).magnitude, 4.0);
        assert!(!report.get(ConstraintKind::ListCardinality).passed);
    }

    #[test]
    fn hand_values() {
        let cfg = tiny();
        let sol = hand_solution();
        let mob = hand_mobility(&cfg);
        assert!((tau_cost(&sol, &mob, &cfg, 0) - 4.0).abs() < 1e-9);
        assert!((paging_cost(&sol, &cfg, 0) - 5.0).abs() < 1e-9);
        assert!((handover_cost(&sol, &mob, &cfg, 0) - 10.0).abs() < 1e-9);
        assert!((power_consumption(&sol, &mob, &cfg) - 0.1).abs() < 1e-9);
    }

    #[test]
    fn zero_mobility_zero_tau_and_handover() {
        let cfg = tiny();
        let adj = build_topology(&cfg).unwrap();
        let mob = MobilityModel::from_matrix(vec![vec![0.0; 4]; 4], adj).unwrap();
        let sol = hand_solution();
        assert_eq!(tau_cost(&sol, &mob, &cfg, 0), 0.0);
        assert_eq!(objective2(&sol, &mob, &cfg), 0.0);
        assert_eq!(power_consumption(&sol, &mob, &cfg), 0.0);
    }

    #[test]
    fn full_list_has_no_tau_or_handover() {
        let mut cfg = tiny();
        cfg.list_size = 4;
        cfg.max_offdiag = 12;
        let sol = AssignmentSolution::new(4, &[vec![0, 1, 2, 3]], vec![vec![0.25; 4]]);
        let mob = hand_mobility(&cfg);
        for k in 0..4 {
            assert_eq!(tau_cost(&sol, &mob, &cfg, k), 0.0);
        }
        assert_eq!(objective2(&sol, &mob, &cfg), 0.0);
    }

    #[test]
    fn zero_costs_give_zero_j1() {
        let mut cfg = tiny();
        cfg.tau_cost = 0.0;
        cfg.relocation_cost = 0.0;
        cfg.paging_cost = 0.0;
        let sol = hand_solution();
        assert_eq!(objective1(&sol, &hand_mobility(&cfg), &cfg), 0.0);
    }
}
