//! Per-agent domination cost and whole-problem optima against LP solutions.

#[path = "support/lp.rs"]
mod lp_oracle;

use stabrepair::bribery::{domination_cost, solve_bipartite};
use stabrepair::oracle::random::{random_bribery_problem, seeded, BriberyShape};
use stabrepair::oracle::{bribery_bruteforce, OracleError};
use lp_oracle::{joint_lp_optimum, lp_domination_cost, random_star};

#[test]
fn threshold_scan_equals_lp() {
    let mut rng = seeded(21);
    for i in 0..300 {
        let (prob, targets) = random_star(&mut rng);
        let a = domination_cost(&prob, &prob.values, 0, &targets).cost;
        let b = lp_domination_cost(&prob, &prob.values, 0, &targets);
        assert!(
            (a.is_infinite() && b.is_infinite()) || (a - b).abs() <= 1e-6,
            "instance {i}: scan {a}, lp {b}"
        );
    }
}

#[test]
fn exact_solvers_equal_the_joint_lp() {
    let mut rng = seeded(22);
    let mut compared = 0;
    for i in 0..400 {
        let shape = BriberyShape { agents: 6, density: 0.5, bounds: i % 2 == 0, weights: i % 3 == 0, ..Default::default() };
        let prob = random_bribery_problem(&mut rng, &shape);
        let outside = prob.graph.edge_count() - prob.matching.len();
        if outside > 9 {
            continue;
        }
        let brute = bribery_bruteforce(&prob, 5);
        if matches!(brute, Err(OracleError::CapExceeded { .. })) {
            continue;
        }
        let lp = joint_lp_optimum(&prob);
        match (&brute, lp) {
            (Ok(s), Some(c)) => assert!((s.cost - c).abs() <= 1e-6, "instance {i}: {} vs {c}", s.cost),
            (Err(_), None) => {}
            _ => panic!("instance {i}: {brute:?} vs {lp:?}"),
        }
        if let (Ok(s), Some(c)) = (solve_bipartite(&prob), lp) {
            assert!((s.cost - c).abs() <= 1e-6);
        }
        compared += 1;
    }
    assert!(compared > 100, "{compared}");
}
