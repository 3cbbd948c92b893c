use crate::instance::{AgentId, Graph, QMatching, StrictOrders};

use super::ExtensionError;

/// Completes the preferences when only the agents in `fixed` have given
/// orders (taken from `orders`) and no two of them are adjacent, and returns
/// a matching stable under the completed orders.
///
/// Fixed agents, by id, take their best unmatched neighbor. The remaining
/// unmatched agents get a greedy maximal matching in edge order. Every
/// non-fixed agent ranks its partner first and the rest by id.
pub fn sr_strat_independent(
    g: &Graph,
    orders: &StrictOrders,
    fixed: &[AgentId],
) -> Result<(StrictOrders, QMatching), ExtensionError> {
    if !g.unit_capacity() {
        return Err(ExtensionError::NotUnitCapacity);
    }
    let mut is_fixed = vec![false; g.agent_count()];
    for &v in fixed {
        if v >= g.agent_count() {
            return Err(crate::error::CoreError::UnknownAgentIndex(v).into());
        }
        is_fixed[v] = true;
    }
    for &(a, b) in g.edges() {
        if is_fixed[a] && is_fixed[b] {
            return Err(ExtensionError::NotIndependent(g.name(a).to_string(), g.name(b).to_string()));
        }
    }
    let mut partner: Vec<Option<AgentId>> = vec![None; g.agent_count()];
    for v in g.agents().filter(|&v| is_fixed[v]) {
        let list = orders.list(v).ok_or_else(|| ExtensionError::MissingFixedOrder(g.name(v).to_string()))?;
        if let Some(&u) = list.iter().find(|&&u| partner[u].is_none()) {
            partner[v] = Some(u);
            partner[u] = Some(v);
        }
    }
    for &(a, b) in g.edges() {
        if partner[a].is_none() && partner[b].is_none() {
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
    }
    let lists: Vec<Option<Vec<AgentId>>> = g
        .agents()
        .map(|v| {
            if is_fixed[v] {
                return orders.list(v).map(<[AgentId]>::to_vec);
            }
            let mut rest: Vec<AgentId> = g.neighbors(v).filter(|&u| Some(u) != partner[v]).collect();
            rest.sort_unstable();
            Some(partner[v].into_iter().chain(rest).collect())
        })
        .collect();
    let full = StrictOrders::new(g, lists)?;
    let edges = g
        .agents()
        .filter_map(|v| partner[v].filter(|&u| v < u).and_then(|u| g.edge_between(v, u)))
        .collect();
    Ok((full, QMatching::new(edges)))
}
