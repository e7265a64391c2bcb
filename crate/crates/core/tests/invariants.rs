use proptest::prelude::*;
use talplan::assignment::{check_constraints, decode, ObjectivePair};
use talplan::mopso::{
    best_compromise, dominates, normalized_membership, v_max, Entry, MopsoParams, ParetoArchive, Swarm,
};
use talplan::network::{build_mobility, build_topology};
use talplan::{NetworkConfig, TalProblem};

fn pair() -> impl Strategy<Value = ObjectivePair> {
    // Coarse values so equal coordinates actually occur.
    (0u8..6, 0u8..6).prop_map(|(a, b)| ObjectivePair::new(a as f64, b as f64))
}

fn front() -> impl Strategy<Value = Vec<ObjectivePair>> {
    prop::collection::vec((0.0f64..100.0, 0.0f64..100.0), 1..30)
        .prop_map(|v| v.into_iter().map(|(a, b)| ObjectivePair::new(a, b)).collect())
}

/// Fuzzy memberships straight from their definition.
fn mu_bar(front: &[ObjectivePair]) -> Vec<f64> {
    let objs = [
        front.iter().map(|p| p.j1).collect::<Vec<_>>(),
        front.iter().map(|p| p.j2).collect::<Vec<_>>(),
    ];
    let mut sums = vec![0.0; front.len()];
    for f in &objs {
        let lo = f.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (i, &v) in f.iter().enumerate() {
            sums[i] += if hi == lo {
                1.0
            } else if v <= lo {
                1.0
            } else if v >= hi {
                0.0
            } else {
                (hi - v) / (hi - lo)
            };
        }
    }
    let total: f64 = sums.iter().sum();
    sums.iter().map(|s| s / total).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dominance_is_a_strict_partial_order(a in pair(), b in pair(), c in pair()) {
        prop_assert!(!dominates(&a, &a));
        prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
        if dominates(&a, &b) && dominates(&b, &c) {
            prop_assert!(dominates(&a, &c));
        }
    }

    #[test]
    fn decoded_positions_are_feasible(
        (rows, cols, lists, size, position) in (1usize..=4, 2usize..=5, 1usize..=4)
            .prop_flat_map(|(r, c, l)| {
                let n = r * c;
                (Just(r), Just(c), Just(l), 1..n, prop::collection::vec(0.0f64..=1.0, 2 * l * n))
            })
    ) {
        let cfg = NetworkConfig::uniform(rows, cols, lists, size, 100.0);
        let sol = decode(&position, &cfg).unwrap();
        let report = check_constraints(&sol, &cfg);
        prop_assert!(report.is_feasible(), "{:?}", report.violations().collect::<Vec<_>>());
        for m in &sol.memberships {
            prop_assert_eq!(m.size(), size);
        }
    }

    #[test]
    fn archive_stays_bounded_and_non_dominated(
        points in front(),
        cap in 2usize..8,
    ) {
        let mut archive = ParetoArchive::new(cap);
        let mut best = (f64::INFINITY, f64::INFINITY);
        for (i, p) in points.iter().enumerate() {
            archive.insert(Entry::new(vec![i as f64], *p));
            prop_assert!(archive.len() <= cap);
            let objs = archive.objectives();
            for a in &objs {
                for b in &objs {
                    prop_assert!(!dominates(a, b));
                }
            }
            let (m1, m2) = (archive.min_j1().unwrap(), archive.min_j2().unwrap());
            prop_assert!(m1 <= best.0 && m2 <= best.1);
            best = (m1, m2);
        }
    }

    #[test]
    fn compromise_has_maximal_normalized_membership(points in front()) {
        let i = best_compromise(&points).unwrap();
        let want = mu_bar(&points);
        let got = normalized_membership(&points).unwrap();
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-12);
        }
        prop_assert!(want.iter().all(|&m| m <= want[i] + 1e-12));
    }
}

fn tal_params(dim: usize, seed: u64) -> MopsoParams {
    let mut p = MopsoParams::new(dim);
    p.population = 24;
    p.iterations = 25;
    p.seed = seed;
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Swarm-level invariants checked after every iteration of a small TAL run.
    #[test]
    fn swarm_iteration_invariants(seed in any::<u64>(), speed in 0.0f64..=33.0, lists in 1usize..=3) {
        let cfg = NetworkConfig::uniform(2, 3, lists, 3, 100.0);
        let adj = build_topology(&cfg).unwrap();
        let mob = build_mobility(&cfg, speed, &adj).unwrap();
        let problem = TalProblem::new(&cfg, &mob);
        let params = tal_params(2 * lists * 6, seed);
        let vmax = v_max(&params);
        let mut swarm = Swarm::new(&problem, params.clone()).unwrap();
        let mut prev = (f64::INFINITY, f64::INFINITY);
        loop {
            let t = swarm.iteration();
            prop_assert!((swarm.inertia() - 0.99f64.powi(t as i32 - 1)).abs() < 1e-12);

            let global = swarm.global_archive();
            prop_assert!(global.len() <= params.global_archive_cap);
            let objs = global.objectives();
            for a in &objs {
                for b in &objs {
                    prop_assert!(!dominates(a, b));
                }
            }
            let mins = (global.min_j1().unwrap(), global.min_j2().unwrap());
            prop_assert!(mins.0 <= prev.0 && mins.1 <= prev.1);
            prev = mins;

            for p in swarm.particles() {
                prop_assert!(p.local_archive().len() <= params.local_archive_cap);
                for (v, m) in p.velocity().iter().zip(&vmax) {
                    prop_assert!(v.abs() <= *m + 1e-15);
                }
                prop_assert!(p.position().iter().all(|x| (0.0..=1.0).contains(x)));
                let sol = decode(p.position(), &cfg).unwrap();
                prop_assert!(check_constraints(&sol, &cfg).is_feasible());
            }
            if swarm.is_finished() {
                break;
            }
            swarm.step().unwrap();
        }
        let out = swarm.finish().unwrap();
        let front: Vec<_> = out.front.iter().map(|e| e.objectives).collect();
        let mu = mu_bar(&front);
        prop_assert!(mu.iter().all(|&m| m <= mu[out.compromise] + 1e-12));
    }
}
