//! Costs recomputed from dense expanded matrices, written straight from the
//! per-cell formulas, against the library's sparse evaluation.

use proptest::prelude::*;
use talplan::assignment::{
    decode, handover_cost, objective1, objective2, paging_cost, power_consumption, tau_cost,
    AssignmentSolution,
};
use talplan::network::{build_mobility, build_topology, UserCounts};
use talplan::{MobilityModel, NetworkConfig};

struct Dense {
    tau: Vec<f64>,
    paging: Vec<f64>,
    handover: Vec<f64>,
    power: f64,
}

fn dense(sol: &AssignmentSolution, prob: &[Vec<f64>], cfg: &NetworkConfig) -> Dense {
    let n = cfg.num_cells;
    let lists = sol.memberships.len();
    let c: Vec<Vec<Vec<f64>>> = sol
        .memberships
        .iter()
        .map(|m| {
            (0..n)
                .map(|k| (0..n).map(|j| if m.members[k] && m.members[j] { 1.0 } else { 0.0 }).collect())
                .collect()
        })
        .collect();
    let sigma = &sol.usage.sigma;
    let ue = |k: usize| cfg.users(k);
    let o = |l: usize| if sol.mme_flags[l] { 1.0 } else { 0.0 };

    let mut tau = vec![0.0; n];
    let mut paging = vec![0.0; n];
    let mut handover = vec![0.0; n];
    let mut events = 0.0;
    for k in 0..n {
        let mut t = 0.0;
        let mut e = 0.0;
        let mut h = 0.0;
        for j in 0..n {
            if j == k {
                continue;
            }
            let mut inner_t = 0.0;
            let mut inner_e = 0.0;
            let mut inner_h = 0.0;
            for l in 0..lists {
                inner_t += cfg.relocation_cost * o(l) * sigma[l][k] * (1.0 - c[l][k][j]);
                inner_e += o(l) * sigma[l][k] * (1.0 - c[l][k][j]);
                inner_h += 1.0 - c[l][k][j];
            }
            t += prob[k][j] * inner_t;
            e += prob[k][j] * inner_e;
            h += prob[k][j] * inner_h;
        }
        tau[k] = ue(k) * cfg.tau_cost * t;
        events += ue(k) * e;
        handover[k] = ue(k) * h;

        let mut p = 0.0;
        for l in 0..lists {
            p += ue(k) * sigma[l][k];
            for j in 0..n {
                if j != k {
                    p += ue(j) * c[l][k][j] * sigma[l][j];
                }
            }
        }
        paging[k] = cfg.paging_rate * cfg.paging_cost * p;
    }
    let total_ue: f64 = (0..n).map(ue).sum();
    Dense {
        tau,
        paging,
        handover,
        power: if total_ue > 0.0 { 10.0 * events / total_ue } else { 0.0 },
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

#[derive(Debug, Clone)]
struct Instance {
    cfg: NetworkConfig,
    speed: f64,
    position: Vec<f64>,
}

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..=3, 2usize..=4, 1usize..=3)
        .prop_flat_map(|(rows, cols, lists)| {
            let n = rows * cols;
            (
                Just((rows, cols, lists)),
                1..n,
                prop::collection::vec(0.0f64..300.0, n),
                0.0f64..=33.0,
                (0.01f64..1.0, 0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0, 100.0f64..800.0),
                prop::collection::vec(0.0f64..=1.0, 2 * lists * n),
            )
        })
        .prop_map(|((rows, cols, lists), size, users, speed, (ga, uc, hc, gc, radius), position)| {
            let mut cfg = NetworkConfig::uniform(rows, cols, lists, size, 0.0);
            cfg.users_per_cell = UserCounts::PerCell(users);
            cfg.paging_rate = ga;
            cfg.tau_cost = uc;
            cfg.relocation_cost = hc;
            cfg.paging_cost = gc;
            cfg.cell_radius = radius;
            Instance { cfg, speed, position }
        })
}

fn mobility(inst: &Instance) -> MobilityModel {
    let adj = build_topology(&inst.cfg).unwrap();
    build_mobility(&inst.cfg, inst.speed, &adj).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sparse_costs_match_dense_formulas(inst in instance()) {
        let mob = mobility(&inst);
        let sol = decode(&inst.position, &inst.cfg).unwrap();
        let d = dense(&sol, &mob.to_matrix(), &inst.cfg);
        for k in 0..inst.cfg.num_cells {
            prop_assert!(close(tau_cost(&sol, &mob, &inst.cfg, k), d.tau[k]));
            prop_assert!(close(paging_cost(&sol, &inst.cfg, k), d.paging[k]));
            prop_assert!(close(handover_cost(&sol, &mob, &inst.cfg, k), d.handover[k]));
        }
        let j1: f64 = d.tau.iter().zip(&d.paging).map(|(a, b)| a + b).sum();
        let j2: f64 = d.handover.iter().sum();
        prop_assert!(close(objective1(&sol, &mob, &inst.cfg), j1));
        prop_assert!(close(objective2(&sol, &mob, &inst.cfg), j2));
        prop_assert!(close(power_consumption(&sol, &mob, &inst.cfg), d.power));
        prop_assert!(j1 >= 0.0 && j2 >= 0.0);
    }

    #[test]
    fn mobility_matches_fluid_flow(inst in instance()) {
        let mob = mobility(&inst);
        let adj = build_topology(&inst.cfg).unwrap();
        let r = inst.cfg.cell_radius;
        let area = 1.5 * 3f64.sqrt() * r * r;
        let per_ue = (6.0 * r * inst.speed / (std::f64::consts::PI * area)).min(1.0);
        for k in 0..inst.cfg.num_cells {
            for j in 0..inst.cfg.num_cells {
                let want = if adj.is_adjacent(k, j) { per_ue / adj.degree(k) as f64 } else { 0.0 };
                prop_assert!(close(mob.prob(k, j), want));
            }
        }
    }

    #[test]
    fn costs_scale_linearly_with_speed(inst in instance()) {
        prop_assume!(inst.speed > 0.5);
        let adj = build_topology(&inst.cfg).unwrap();
        let slow = build_mobility(&inst.cfg, inst.speed / 2.0, &adj).unwrap();
        let fast = build_mobility(&inst.cfg, inst.speed, &adj).unwrap();
        let per_ue = 6.0 * inst.speed / (std::f64::consts::PI * 1.5 * 3f64.sqrt() * inst.cfg.cell_radius);
        prop_assume!(per_ue <= 1.0);
        let sol = decode(&inst.position, &inst.cfg).unwrap();
        prop_assert!(close(objective2(&sol, &fast, &inst.cfg), 2.0 * objective2(&sol, &slow, &inst.cfg)));
        prop_assert!(close(
            power_consumption(&sol, &fast, &inst.cfg),
            2.0 * power_consumption(&sol, &slow, &inst.cfg)
        ));
    }

    /// Growing a list by one cell with positive usage never raises J² and
    /// never lowers the paging cost of the old members.
    #[test]
    fn larger_lists_trade_handover_for_paging(inst in instance(), extra_usage in 0.01f64..0.5) {
        let cfg = &inst.cfg;
        prop_assume!(cfg.list_size + 1 < cfg.num_cells);
        let mob = mobility(&inst);
        let small = decode(&inst.position, cfg).unwrap();
        let members = small.memberships[0].cells();
        let added = (0..cfg.num_cells).find(|c| !members.contains(c)).unwrap();

        let lists: Vec<Vec<usize>> = small
            .memberships
            .iter()
            .enumerate()
            .map(|(l, m)| {
                let mut c = m.cells();
                if l == 0 {
                    c.push(added);
                }
                c
            })
            .collect();
        let mut sigma = small.usage.sigma.clone();
        sigma[0][added] = extra_usage;
        let mut wide_cfg = cfg.clone();
        wide_cfg.list_size += 1;
        let wide = AssignmentSolution::new(cfg.num_cells, &lists, sigma);

        prop_assert!(objective2(&wide, &mob, cfg) <= objective2(&small, &mob, cfg) + 1e-9);
        for &k in &members {
            prop_assert!(paging_cost(&wide, cfg, k) >= paging_cost(&small, cfg, k) - 1e-9);
        }
    }
}

#[test]
fn everything_in_one_list_costs_no_tau_or_handover() {
    let cfg = NetworkConfig::uniform(2, 3, 1, 6, 100.0);
    let adj = build_topology(&cfg).unwrap();
    let mob = build_mobility(&cfg, 20.0, &adj).unwrap();
    let sol = AssignmentSolution::new(6, &[(0..6).collect()], vec![vec![1.0 / 6.0; 6]]);
    for k in 0..6 {
        assert_eq!(tau_cost(&sol, &mob, &cfg, k), 0.0);
        assert_eq!(handover_cost(&sol, &mob, &cfg, k), 0.0);
    }
    assert_eq!(power_consumption(&sol, &mob, &cfg), 0.0);
}

#[test]
fn removing_a_cells_users_removes_its_terms() {
    let mut cfg = NetworkConfig::uniform(2, 2, 1, 2, 0.0);
    cfg.users_per_cell = UserCounts::PerCell(vec![100.0, 50.0, 80.0, 20.0]);
    let adj = build_topology(&cfg).unwrap();
    let mob = build_mobility(&cfg, 10.0, &adj).unwrap();
    let sol = AssignmentSolution::new(4, &[vec![0, 2]], vec![vec![0.4, 0.0, 0.6, 0.0]]);
    let full = objective1(&sol, &mob, &cfg);

    let mut without = cfg.clone();
    without.users_per_cell = UserCounts::PerCell(vec![0.0, 50.0, 80.0, 20.0]);
    let own = tau_cost(&sol, &mob, &cfg, 0) + cfg.paging_rate * cfg.users(0) * 0.4;
    // Cell 0's UEs also appear in its co-member's paging term.
    let shared = cfg.paging_rate * cfg.users(0) * 0.4;
    assert!(close(objective1(&sol, &mob, &without), full - own - shared));
}
