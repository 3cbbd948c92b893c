use crate::instance::{AgentId, EdgeId, Values};

use super::BriberyProblem;

/// Cheapest way for one agent to dominate a set of its non-matching edges.
#[derive(Clone, Debug, PartialEq)]
pub struct DominationCost {
    /// `+inf` when the agent is unsaturated or the bounds leave no threshold.
    pub cost: f64,
    /// The common level `t`: matching values are raised to at least `t`,
    /// target values lowered to at most `t`.
    pub threshold: Option<f64>,
    /// `(edge, old, new)` at this agent.
    pub changes: Vec<(EdgeId, f64, f64)>,
}

impl DominationCost {
    fn infinite() -> Self {
        DominationCost { cost: f64::INFINITY, threshold: None, changes: Vec::new() }
    }
}

/// Minimum weighted cost for `v` to dominate every edge in `targets`, starting
/// from `values` (already clamped into the bounds).
///
/// The optimum moves every target down and every matching edge up to a
/// common threshold `t`, so it is the minimum of the convex piecewise-linear
/// `lambda * (sum over M(v) of (t - p)+ + sum over targets of (p - t)+)`
/// over the admissible thresholds, attained at a breakpoint. The smallest
/// optimal `t` is used.
pub fn domination_cost(
    prob: &BriberyProblem,
    values: &Values,
    v: AgentId,
    targets: &[EdgeId],
) -> DominationCost {
    if targets.is_empty() {
        return DominationCost { cost: 0.0, threshold: None, changes: Vec::new() };
    }
    let g = &prob.graph;
    let mine: Vec<EdgeId> =
        g.incident(v).iter().copied().filter(|&e| prob.matching.contains(e)).collect();
    if (mine.len() as u32) < g.capacity(v) {
        return DominationCost::infinite();
    }
    let m: Vec<(f64, f64)> = mine.iter().map(|&e| (values.get(g, v, e), prob.upper(v, e))).collect();
    let t: Vec<(f64, f64)> = targets.iter().map(|&e| (values.get(g, v, e), prob.lower(v, e))).collect();
    let Some((cost, th)) = threshold_scan(prob.weight(v), &m, &t) else {
        return DominationCost::infinite();
    };
    let mut changes = Vec::new();
    for (&e, &(p, _)) in mine.iter().zip(&m) {
        if p < th {
            changes.push((e, p, th));
        }
    }
    for (&e, &(p, _)) in targets.iter().zip(&t) {
        if p > th {
            changes.push((e, p, th));
        }
    }
    changes.sort_by_key(|c| c.0);
    DominationCost { cost, threshold: Some(th), changes }
}

/// `matching`: `(value, upper bound)` pairs; `targets`: `(value, lower bound)`.
/// Returns the minimum cost and the smallest minimizing threshold, or `None`
/// when no threshold is admissible.
pub(crate) fn threshold_scan(lambda: f64, matching: &[(f64, f64)], targets: &[(f64, f64)]) -> Option<(f64, f64)> {
    let lo = targets.iter().map(|&(_, l)| l).fold(0.0f64, f64::max);
    let hi = matching.iter().map(|&(_, u)| u).fold(f64::INFINITY, f64::min);
    if lo > hi {
        return None;
    }
    let phi = |t: f64| -> f64 {
        let raise: f64 = matching.iter().map(|&(p, _)| (t - p).max(0.0)).sum();
        let lower: f64 = targets.iter().map(|&(p, _)| (p - t).max(0.0)).sum();
        lambda * (raise + lower)
    };
    let mut cands: Vec<f64> = matching
        .iter()
        .chain(targets)
        .map(|&(p, _)| p)
        .filter(|&p| p > lo && p < hi)
        .collect();
    cands.push(lo);
    if hi.is_finite() {
        cands.push(hi);
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let vals: Vec<f64> = cands.iter().map(|&t| phi(t)).collect();
    let best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = 1e-12 * (1.0 + best.abs());
    let i = vals.iter().position(|&x| x <= best + slack).unwrap();
    Some((vals[i], cands[i]))
}
