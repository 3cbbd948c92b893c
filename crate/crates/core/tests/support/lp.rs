//! Linear programs stating the bribery problem directly, solved with a
//! general LP solver. Shared by several test crates, which use different parts.

#![allow(dead_code)]

use minilp::{ComparisonOp, OptimizationDirection, Problem, Variable};
use stabrepair::bribery::BriberyProblem;
use rand::Rng;
use stabrepair::{AgentId, EdgeId, Graph, QMatching, ValueBounds, Values};

/// Adds `x` in `[lo, hi]` and `d >= |x - p|` with objective `weight * d`.
fn abs_var(lp: &mut Problem, p: f64, lo: f64, hi: f64, weight: f64) -> Variable {
    let x = lp.add_var(0.0, (lo, hi));
    let d = lp.add_var(weight, (0.0, f64::INFINITY));
    lp.add_constraint([(d, 1.0), (x, -1.0)], ComparisonOp::Ge, -p);
    lp.add_constraint([(d, 1.0), (x, 1.0)], ComparisonOp::Ge, p);
    x
}

/// Minimum weighted change of `v`'s values (starting from `values`) such
/// that every target is valued at most every matching edge of `v`.
pub fn lp_domination_cost(prob: &BriberyProblem, values: &Values, v: AgentId, targets: &[EdgeId]) -> f64 {
    let g = &prob.graph;
    let mine: Vec<EdgeId> = g.incident(v).iter().copied().filter(|&e| prob.matching.contains(e)).collect();
    if targets.is_empty() {
        return 0.0;
    }
    if (mine.len() as u32) < g.capacity(v) {
        return f64::INFINITY;
    }
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let w = prob.weight(v);
    let xs: Vec<(EdgeId, Variable)> = g
        .incident(v)
        .iter()
        .map(|&e| (e, abs_var(&mut lp, values.get(g, v, e), prob.lower(v, e), prob.upper(v, e), w)))
        .collect();
    let var = |e: EdgeId| xs.iter().find(|(f, _)| *f == e).unwrap().1;
    for &t in targets {
        for &f in &mine {
            lp.add_constraint([(var(t), 1.0), (var(f), -1.0)], ComparisonOp::Le, 0.0);
        }
    }
    match lp.solve() {
        Ok(s) => s.objective(),
        Err(_) => f64::INFINITY,
    }
}

/// Optimum of the whole problem: over every choice of a saturated endpoint
/// for each non-matching edge, one LP over all values. `None` if no choice
/// is feasible.
pub fn joint_lp_optimum(prob: &BriberyProblem) -> Option<f64> {
    let g = &prob.graph;
    let at = prob.matching.at(g);
    let saturated = prob.matching.saturated(g);
    let outside: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| !prob.matching.contains(e)).collect();
    let options: Vec<Vec<AgentId>> = outside
        .iter()
        .map(|&e| {
            let (a, b) = g.endpoints(e);
            [a, b].into_iter().filter(|&v| saturated[v]).collect()
        })
        .collect();
    if options.iter().any(Vec::is_empty) {
        return None;
    }
    let mut best: Option<f64> = None;
    let mut pick = vec![0usize; outside.len()];
    loop {
        let mut lp = Problem::new(OptimizationDirection::Minimize);
        let mut x: Vec<[Option<Variable>; 2]> = vec![[None; 2]; g.edge_count()];
        for e in 0..g.edge_count() {
            let (a, b) = g.endpoints(e);
            for (s, v) in [a, b].into_iter().enumerate() {
                x[e][s] = Some(abs_var(
                    &mut lp,
                    prob.values.get(g, v, e),
                    prob.lower(v, e),
                    prob.upper(v, e),
                    prob.weight(v),
                ));
            }
        }
        let xv = |v: AgentId, e: EdgeId| x[e][g.side(e, v)].unwrap();
        for (i, &e) in outside.iter().enumerate() {
            let v = options[i][pick[i]];
            for &f in &at[v] {
                lp.add_constraint([(xv(v, e), 1.0), (xv(v, f), -1.0)], ComparisonOp::Le, 0.0);
            }
        }
        if let Ok(s) = lp.solve() {
            let c = s.objective();
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
        let mut k = outside.len();
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < options[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
}

/// Star around agent 0 with `k` leaves; the first `q` edges form the matching.
pub fn random_star(rng: &mut impl Rng) -> (BriberyProblem, Vec<usize>) {
    let k = rng.random_range(1..=6);
    let q = rng.random_range(1..=k.min(3));
    let mut caps = vec![1; k + 1];
    caps[0] = q as u32;
    let names = (0..=k).map(|i| format!("v{i}")).collect();
    let g = Graph::new(names, caps, (1..=k).map(|i| (0, i))).unwrap();
    let mut values = Values::uniform(&g, 0.0);
    let mut bounds = ValueBounds::unbounded(&g);
    let bounded = rng.random_bool(0.5);
    for e in 0..k {
        let lo = if bounded && rng.random_bool(0.4) { rng.random_range(0..4) as f64 } else { 0.0 };
        let hi = if bounded && rng.random_bool(0.4) { lo + rng.random_range(0..5) as f64 } else { f64::INFINITY };
        let x = lo + rng.random_range(0..10) as f64 / 2.0;
        values.set(&g, 0, e, if hi.is_finite() { x.min(hi) } else { x });
        bounds.set(&g, 0, e, lo, hi).unwrap();
    }
    let mut prob = BriberyProblem::new(g, values, QMatching::new((0..q).collect()));
    prob.bounds = Some(bounds);
    prob.weights = Some((0..=k).map(|_| rng.random_range(1..=3) as f64).collect());
    let targets = (q..k).filter(|_| rng.random_bool(0.7)).collect();
    (prob, targets)
}
