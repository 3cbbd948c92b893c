//! Minimum l1 modification of cardinal preferences so that a given maximal
//! q-matching becomes weakly stable.
//!
//! Every blocking edge must end up dominated at one of its saturated
//! endpoints. Once the dominating endpoint of every edge is chosen, each
//! agent solves its own one-dimensional problem ([`domination_cost`]); the
//! choice itself is a vertex cover of a perfect matching under a submodular
//! cost, minimized by [`minimize_submodular`].

mod cost;
mod solve;
mod submodular;

use thiserror::Error;

use crate::error::CoreError;
use crate::instance::{AgentId, EdgeId, Graph, QMatching, ValueBounds, Values};
use crate::stability::{blocking_edges, is_maximal};

pub use cost::{domination_cost, DominationCost};
pub use solve::{
    build_cover_problem, solve_2approx, solve_bipartite, solve_frozen, Certificate, CoverProblem,
    Element,
};
pub use submodular::{minimize_exhaustive, minimize_min_norm_point, minimize_submodular, SetMinimum};

/// Ground sets up to this size are minimized by exhaustive search.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BriberyError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("the q-matching is not maximal, so the problem is infeasible")]
    NotMaximal,
    #[error("the graph is not bipartite")]
    NotBipartite,
    #[error("edge {0} cannot be dominated at either endpoint within the bounds")]
    Infeasible(String),
    #[error("edge {0} has two unsaturated endpoints")]
    BothUnsaturated(String),
    #[error("weights must be positive and finite, one per agent")]
    InvalidWeights,
    #[error("set function returned {0} (NaN or infinite after normalization)")]
    BadOracleValue(f64),
    #[error("{size} blocking edges exceed the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
}

/// Input of the bribery solvers. `bounds` and `weights` are optional.
#[derive(Clone, Debug, PartialEq)]
pub struct BriberyProblem {
    pub graph: Graph,
    pub values: Values,
    pub matching: QMatching,
    pub bounds: Option<ValueBounds>,
    pub weights: Option<Vec<f64>>,
}

impl BriberyProblem {
    pub fn new(graph: Graph, values: Values, matching: QMatching) -> Self {
        BriberyProblem { graph, values, matching, bounds: None, weights: None }
    }

    pub fn weight(&self, v: AgentId) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[v])
    }

    pub fn lower(&self, v: AgentId, e: EdgeId) -> f64 {
        self.bounds.as_ref().map_or(0.0, |b| b.lower(&self.graph, v, e))
    }

    pub fn upper(&self, v: AgentId, e: EdgeId) -> f64 {
        self.bounds.as_ref().map_or(f64::INFINITY, |b| b.upper(&self.graph, v, e))
    }

    /// Weighted l1 distance from the original values to `p`.
    pub fn cost_of(&self, p: &Values) -> f64 {
        let g = &self.graph;
        let mut total = 0.0;
        for v in g.agents() {
            let lambda = self.weight(v);
            for &e in g.incident(v) {
                total += lambda * (self.values.get(g, v, e) - p.get(g, v, e)).abs();
            }
        }
        total
    }

    /// Per-(agent, edge) differences between the original values and `p`,
    /// ordered by agent and then edge id.
    pub fn changes_to(&self, p: &Values) -> Vec<Change> {
        let g = &self.graph;
        let mut out = Vec::new();
        for v in g.agents() {
            for &e in g.incident(v) {
                let (old, new) = (self.values.get(g, v, e), p.get(g, v, e));
                if old != new {
                    out.push(Change { agent: v, edge: e, old, new });
                }
            }
        }
        out
    }

    /// Whether `p` lies within the bounds (with absolute slack `tol`).
    pub fn within_bounds(&self, p: &Values, tol: f64) -> bool {
        let g = &self.graph;
        g.agents().all(|v| {
            g.incident(v).iter().all(|&e| {
                let x = p.get(g, v, e);
                x >= self.lower(v, e) - tol && x <= self.upper(v, e) + tol
            })
        })
    }

    fn validate(&self) -> Result<(), BriberyError> {
        let g = &self.graph;
        if self.values.pairs().len() != g.edge_count() {
            return Err(CoreError::GraphMismatch.into());
        }
        if let Some(w) = &self.weights {
            if w.len() != g.agent_count() || w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return Err(BriberyError::InvalidWeights);
            }
        }
        self.matching.check(g)?;
        Ok(())
    }
}

/// One modified value: `p_agent(edge)` went from `old` to `new`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Change {
    pub agent: AgentId,
    pub edge: EdgeId,
    pub old: f64,
    pub new: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BriberySolution {
    pub values: Values,
    pub cost: f64,
    pub changes: Vec<Change>,
    /// For every blocking edge (after preprocessing), the endpoint it is dominated at.
    pub dominated_at: Vec<(EdgeId, AgentId)>,
    /// Present for the approximation: a lower bound on the optimum.
    pub certificate: Option<Certificate>,
}

/// Result of preprocessing: values clamped into their bounds and the edges
/// that still block.
#[derive(Clone, Debug, PartialEq)]
pub struct Preprocessed {
    pub values: Values,
    pub clamps: Vec<Change>,
    /// Weighted cost of the clamps.
    pub clamp_cost: f64,
    /// Non-matching edges already dominated after clamping.
    pub dominated: Vec<EdgeId>,
    /// Non-matching edges that block after clamping, ascending.
    pub blocking: Vec<EdgeId>,
    pub at: Vec<Vec<EdgeId>>,
    pub saturated: Vec<bool>,
}

/// Clamps values into their bounds, rejects non-maximal matchings and splits
/// the non-matching edges into already dominated and blocking ones.
pub fn preprocess(prob: &BriberyProblem) -> Result<Preprocessed, BriberyError> {
    prob.validate()?;
    let g = &prob.graph;
    if !is_maximal(g, &prob.matching)? {
        return Err(BriberyError::NotMaximal);
    }
    let mut values = prob.values.clone();
    let mut clamps = Vec::new();
    let mut clamp_cost = 0.0;
    for v in g.agents() {
        for &e in g.incident(v) {
            let old = values.get(g, v, e);
            let new = old.clamp(prob.lower(v, e), prob.upper(v, e));
            if new != old {
                values.set(g, v, e, new);
                clamps.push(Change { agent: v, edge: e, old, new });
                clamp_cost += prob.weight(v) * (old - new).abs();
            }
        }
    }
    let blocking = blocking_edges(g, &values, &prob.matching)?;
    let mask = prob.matching.mask(g);
    let dominated = (0..g.edge_count()).filter(|&e| !mask[e] && blocking.binary_search(&e).is_err()).collect();
    let saturated = prob.matching.saturated(g);
    for &e in &blocking {
        let (a, b) = g.endpoints(e);
        if !saturated[a] && !saturated[b] {
            return Err(BriberyError::BothUnsaturated(g.edge_label(e)));
        }
    }
    Ok(Preprocessed { values, clamps, clamp_cost, dominated, blocking, at: prob.matching.at(g), saturated })
}
