//! Blocking edges, stability, maximality and domination for q-matchings.

use crate::error::CoreError;
use crate::instance::{AgentId, EdgeId, Graph, QMatching, StrictOrders, Values, TAU};

/// A preference encoding that can compare two edges at a common endpoint.
pub trait Preferences {
    /// Whether `v` strictly prefers edge `a` to edge `b` (both incident to `v`).
    fn prefers(&self, g: &Graph, v: AgentId, a: EdgeId, b: EdgeId) -> bool;
}

impl Preferences for Values {
    fn prefers(&self, g: &Graph, v: AgentId, a: EdgeId, b: EdgeId) -> bool {
        self.get(g, v, a) > self.get(g, v, b) + TAU
    }
}

impl Preferences for StrictOrders {
    fn prefers(&self, g: &Graph, v: AgentId, a: EdgeId, b: EdgeId) -> bool {
        self.score(g, v, a) > self.score(g, v, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    /// One blocking edge, the smallest by edge id.
    Blocked(EdgeId),
}

impl Stability {
    pub fn is_stable(self) -> bool {
        self == Stability::Stable
    }
}

/// Whether non-matching edge `e` is dominated at `v`: `v` is saturated and
/// does not strictly prefer `e` to any of its partners.
pub fn dominated_at<P: Preferences>(
    g: &Graph,
    prefs: &P,
    at: &[Vec<EdgeId>],
    v: AgentId,
    e: EdgeId,
) -> bool {
    at[v].len() as u32 >= g.capacity(v) && at[v].iter().all(|&f| !prefs.prefers(g, v, e, f))
}

/// Edges outside `m` whose endpoints are each unsaturated or strictly prefer
/// the edge to one of their partners, ascending by edge id.
pub fn blocking_edges<P: Preferences>(
    g: &Graph,
    prefs: &P,
    m: &QMatching,
) -> Result<Vec<EdgeId>, CoreError> {
    m.check(g)?;
    let at = m.at(g);
    let mask = m.mask(g);
    Ok((0..g.edge_count())
        .filter(|&e| {
            let (a, b) = g.endpoints(e);
            !mask[e] && !dominated_at(g, prefs, &at, a, e) && !dominated_at(g, prefs, &at, b, e)
        })
        .collect())
}

pub fn is_stable<P: Preferences>(
    g: &Graph,
    prefs: &P,
    m: &QMatching,
) -> Result<Stability, CoreError> {
    Ok(match blocking_edges(g, prefs, m)?.first() {
        Some(&e) => Stability::Blocked(e),
        None => Stability::Stable,
    })
}

/// No edge outside `m` joins two unsaturated agents.
pub fn is_maximal(g: &Graph, m: &QMatching) -> Result<bool, CoreError> {
    m.check(g)?;
    let sat = m.saturated(g);
    let mask = m.mask(g);
    Ok((0..g.edge_count()).all(|e| {
        let (a, b) = g.endpoints(e);
        mask[e] || sat[a] || sat[b]
    }))
}
