//! Completing partial rank lists so that a given q-matching is stable, the
//! independent-set strategy case, and red-blue edge cover.
//!
//! Ranks count from the worst edge (1 = worst). A non-matching edge `e` is
//! dominated at `v` exactly when `v` is saturated and `e` ranks below every
//! matching edge of `v`, that is below `v`'s worst matching rank `w_v`.

mod lower;
mod ranks;
mod redblue;
mod strat;

use thiserror::Error;

use crate::error::CoreError;
use crate::instance::{AgentId, EdgeId, Graph, QMatching, RankBounds, Ranks};
use crate::stability::is_maximal;

pub use lower::{extend_ranks_lb, extend_ranks_lb_traced, LowerBoundTrace};
pub use ranks::extend_ranks;
pub use redblue::{red_blue_cover, RedBlueInstance, DEFAULT_RED_CAP};
pub use strat::sr_strat_independent;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtensionError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("the q-matching is not maximal")]
    NotMaximal,
    #[error("saturated agent {agent} has no fixed rank for matching edge {edge}")]
    MissingMatchingRank { agent: String, edge: String },
    #[error("fixed agents {0} and {1} are adjacent")]
    NotIndependent(String, String),
    #[error("agent {0} is fixed but has no preference order")]
    MissingFixedOrder(String),
    #[error("independent-set strategy needs unit capacities")]
    NotUnitCapacity,
    #[error("red-blue instances must be bipartite")]
    NotBipartite,
    #[error("edge {0} has no color")]
    Uncolored(String),
    #[error("{size} red edges exceed the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
}

/// A partial rank assignment to complete, with optional rank lower bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionProblem {
    pub graph: Graph,
    pub ranks: Ranks,
    pub matching: QMatching,
    pub lower: Option<RankBounds>,
}

impl ExtensionProblem {
    pub fn new(graph: Graph, ranks: Ranks, matching: QMatching) -> Self {
        ExtensionProblem { graph, ranks, matching, lower: None }
    }

    pub fn lower_bound(&self, v: AgentId, e: EdgeId) -> u32 {
        self.lower.as_ref().map_or(1, |b| b.get(&self.graph, v, e))
    }

    /// Whether `full` completes the fixed ranks, respects the lower bounds
    /// and makes the matching stable.
    pub fn accepts(&self, full: &Ranks) -> bool {
        let g = &self.graph;
        if !full.is_complete(g) {
            return false;
        }
        for v in g.agents() {
            for &e in g.incident(v) {
                let r = full.get(g, v, e).unwrap();
                if self.ranks.get(g, v, e).is_some_and(|fixed| fixed != r) || r < self.lower_bound(v, e) {
                    return false;
                }
            }
        }
        let orders = full.to_orders(g);
        crate::stability::is_stable(g, &orders, &self.matching).is_ok_and(|s| s.is_stable())
    }
}

/// How a non-matching edge relates to one of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    /// Cannot be dominated here: unsaturated, or fixed above the worst matching rank.
    Fails,
    /// Fixed below the worst matching rank.
    Dominated,
    /// Rank not fixed; may be placed below the worst matching rank.
    Open,
}

/// Shared validation and classification.
pub(crate) struct Analysis {
    /// Worst matching rank of saturated agents.
    pub worst: Vec<Option<u32>>,
    /// Non-matching edges that still need an endpoint, ascending.
    pub pending: Vec<EdgeId>,
    /// `side[e]` for non-matching edges, indexed by endpoint side.
    pub side: Vec<[Side; 2]>,
    /// Some non-matching edge fails at both endpoints.
    pub necessarily_blocked: bool,
}

pub(crate) fn analyse(ep: &ExtensionProblem) -> Result<Analysis, ExtensionError> {
    let g = &ep.graph;
    if !is_maximal(g, &ep.matching)? {
        return Err(ExtensionError::NotMaximal);
    }
    let at = ep.matching.at(g);
    let mut worst = vec![None; g.agent_count()];
    for v in g.agents() {
        if (at[v].len() as u32) < g.capacity(v) {
            continue;
        }
        let mut w = u32::MAX;
        for &f in &at[v] {
            match ep.ranks.get(g, v, f) {
                Some(r) => w = w.min(r),
                None => {
                    return Err(ExtensionError::MissingMatchingRank {
                        agent: g.name(v).to_string(),
                        edge: g.edge_label(f),
                    })
                }
            }
        }
        worst[v] = Some(w);
    }
    let mut pending = Vec::new();
    let mut side = vec![[Side::Fails; 2]; g.edge_count()];
    let mut necessarily_blocked = false;
    for e in 0..g.edge_count() {
        if ep.matching.contains(e) {
            continue;
        }
        let (a, b) = g.endpoints(e);
        let s = [a, b].map(|v| match (worst[v], ep.ranks.get(g, v, e)) {
            (None, _) => Side::Fails,
            (Some(w), Some(r)) if r < w => Side::Dominated,
            (Some(_), Some(_)) => Side::Fails,
            (Some(_), None) => Side::Open,
        });
        side[e] = s;
        if s.contains(&Side::Dominated) {
            continue;
        }
        if s == [Side::Fails; 2] {
            necessarily_blocked = true;
        }
        pending.push(e);
    }
    Ok(Analysis { worst, pending, side, necessarily_blocked })
}

/// Unfixed positions of `v`, ascending.
pub(crate) fn free_positions(g: &Graph, ranks: &Ranks, v: AgentId) -> Vec<u32> {
    let used: Vec<u32> = g.incident(v).iter().filter_map(|&e| ranks.get(g, v, e)).collect();
    (1..=g.degree(v) as u32).filter(|k| !used.contains(k)).collect()
}
