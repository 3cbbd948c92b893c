use crate::bribery::{domination_cost, BriberyError, BriberyProblem, BriberySolution};
use crate::instance::{AgentId, EdgeId, Values};
use crate::stability::{blocking_edges, is_maximal};

use super::{check_cap, OracleError};

/// Exact bribery optimum: clamps into the bounds, then tries every way of
/// assigning the blocking edges to an endpoint and sums the per-agent
/// domination costs. The first cheapest assignment in mask order wins
/// (bit `i` set means edge `i` is dominated at its higher endpoint).
pub fn bribery_bruteforce(prob: &BriberyProblem, cap: usize) -> Result<BriberySolution, OracleError> {
    let g = &prob.graph;
    prob.matching.check(g)?;
    if !is_maximal(g, &prob.matching)? {
        return Err(BriberyError::NotMaximal.into());
    }
    let mut clamped = prob.values.clone();
    for v in g.agents() {
        for &e in g.incident(v) {
            let x = clamped.get(g, v, e);
            let (lo, hi) = (prob.lower(v, e), prob.upper(v, e));
            if x < lo {
                clamped.set(g, v, e, lo);
            } else if x > hi {
                clamped.set(g, v, e, hi);
            }
        }
    }
    let blocking = blocking_edges(g, &clamped, &prob.matching)?;
    let k = blocking.len();
    check_cap("blocking edges", k, cap)?;
    let assign = |mask: u64| -> Vec<Vec<EdgeId>> {
        let mut per = vec![Vec::new(); g.agent_count()];
        for (i, &e) in blocking.iter().enumerate() {
            let (a, b) = g.endpoints(e);
            per[if mask >> i & 1 == 1 { b } else { a }].push(e);
        }
        per
    };
    let mut best: Option<(f64, u64)> = None;
    for mask in 0..1u64 << k {
        let cost: f64 = assign(mask)
            .iter()
            .enumerate()
            .map(|(v, t)| domination_cost(prob, &clamped, v, t).cost)
            .sum();
        if cost.is_finite() && best.is_none_or(|(c, _)| cost < c) {
            best = Some((cost, mask));
        }
    }
    let (_, mask) = best.ok_or(OracleError::Infeasible)?;
    let per = assign(mask);
    let mut values: Values = clamped.clone();
    let mut dominated_at: Vec<(EdgeId, AgentId)> = Vec::new();
    for (v, targets) in per.iter().enumerate() {
        for (e, _, new) in domination_cost(prob, &clamped, v, targets).changes {
            values.set(g, v, e, new);
        }
        dominated_at.extend(targets.iter().map(|&e| (e, v)));
    }
    dominated_at.sort_unstable();
    Ok(BriberySolution {
        cost: prob.cost_of(&values),
        changes: prob.changes_to(&values),
        values,
        dominated_at,
        certificate: None,
    })
}
