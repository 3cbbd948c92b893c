use crate::instance::{AgentId, EdgeId, Values};

use super::cost::threshold_scan;
use super::{
    domination_cost, minimize_submodular, preprocess, BriberyError, BriberyProblem, BriberySolution,
    Preprocessed,
};

/// One blocking edge of the cover problem and its admissible dominators.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub edge: EdgeId,
    /// Endpoints, lower id first.
    pub ends: [AgentId; 2],
    /// Whether the edge can be dominated at `ends[s]` (saturated, and the
    /// bounds leave room).
    pub allowed: [bool; 2],
}

impl Element {
    /// The only admissible side, if exactly one.
    pub fn forced(&self) -> Option<usize> {
        match self.allowed {
            [true, false] => Some(0),
            [false, true] => Some(1),
            _ => None,
        }
    }
}

/// Choosing a dominating endpoint for every blocking edge. The cost of a
/// choice is the sum over agents of their domination cost for the edges
/// assigned to them.
#[derive(Clone, Debug)]
pub struct CoverProblem<'a> {
    pub prob: &'a BriberyProblem,
    pub pre: Preprocessed,
    pub elements: Vec<Element>,
    /// Per agent: `(value, upper bound)` of its matching edges.
    matching_terms: Vec<Vec<(f64, f64)>>,
    /// Per element and side: `(value, lower bound)` at that endpoint.
    target_terms: Vec<[(f64, f64); 2]>,
}

/// Preprocesses and lays out the cover problem.
pub fn build_cover_problem(prob: &BriberyProblem) -> Result<CoverProblem<'_>, BriberyError> {
    let pre = preprocess(prob)?;
    let g = &prob.graph;
    let matching_terms: Vec<Vec<(f64, f64)>> = g
        .agents()
        .map(|v| pre.at[v].iter().map(|&f| (pre.values.get(g, v, f), prob.upper(v, f))).collect())
        .collect();
    let mut elements = Vec::with_capacity(pre.blocking.len());
    let mut target_terms = Vec::with_capacity(pre.blocking.len());
    for &e in &pre.blocking {
        let (a, b) = g.endpoints(e);
        let ends = [a, b];
        let terms = ends.map(|v| (pre.values.get(g, v, e), prob.lower(v, e)));
        let allowed = [0, 1].map(|s| {
            let v = ends[s];
            pre.saturated[v] && threshold_scan(1.0, &matching_terms[v], &[terms[s]]).is_some()
        });
        elements.push(Element { edge: e, ends, allowed });
        target_terms.push(terms);
    }
    Ok(CoverProblem { prob, pre, elements, matching_terms, target_terms })
}

impl<'a> CoverProblem<'a> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Weighted domination cost at `v` for the given element indices.
    pub fn vertex_cost(&self, v: AgentId, elements: &[usize]) -> f64 {
        if elements.is_empty() {
            return 0.0;
        }
        if !self.pre.saturated[v] {
            return f64::INFINITY;
        }
        let targets: Vec<(f64, f64)> = elements
            .iter()
            .map(|&i| {
                let s = usize::from(self.elements[i].ends[0] != v);
                debug_assert_eq!(self.elements[i].ends[s], v);
                self.target_terms[i][s]
            })
            .collect();
        threshold_scan(self.prob.weight(v), &self.matching_terms[v], &targets).map_or(f64::INFINITY, |r| r.0)
    }

    /// `c(choice)`: `choice[i]` is the side (0 or 1) of element `i`.
    pub fn cost(&self, choice: &[usize]) -> f64 {
        let mut per: Vec<Vec<usize>> = vec![Vec::new(); self.prob.graph.agent_count()];
        for (i, &s) in choice.iter().enumerate() {
            per[self.elements[i].ends[s]].push(i);
        }
        per.iter().enumerate().map(|(v, els)| self.vertex_cost(v, els)).sum()
    }

    /// Errors with the first element that has no admissible side.
    fn check_coverable(&self) -> Result<(), BriberyError> {
        match self.elements.iter().find(|x| x.allowed == [false, false]) {
            Some(x) => Err(BriberyError::Infeasible(self.prob.graph.edge_label(x.edge))),
            None => Ok(()),
        }
    }

    /// Indices of elements with two admissible sides.
    pub fn free(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.elements[i].allowed == [true, true]).collect()
    }

    /// Builds the solution for a full choice of sides.
    pub fn realize(&self, choice: &[usize]) -> BriberySolution {
        let g = &self.prob.graph;
        let mut per: Vec<Vec<EdgeId>> = vec![Vec::new(); g.agent_count()];
        let mut dominated_at = Vec::with_capacity(choice.len());
        for (i, &s) in choice.iter().enumerate() {
            let x = &self.elements[i];
            per[x.ends[s]].push(x.edge);
            dominated_at.push((x.edge, x.ends[s]));
        }
        let mut values: Values = self.pre.values.clone();
        for (v, targets) in per.iter().enumerate() {
            let d = domination_cost(self.prob, &self.pre.values, v, targets);
            debug_assert!(d.cost.is_finite());
            for (e, _, new) in d.changes {
                values.set(g, v, e, new);
            }
        }
        let cost = self.prob.cost_of(&values);
        let changes = self.prob.changes_to(&values);
        BriberySolution { values, cost, changes, dominated_at, certificate: None }
    }
}

/// Lower bound certificate of the approximation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certificate {
    /// A value no larger than the optimum cost.
    pub lower_bound: f64,
    /// `cost / lower_bound` (1 when both are 0); never above 2.
    pub ratio: f64,
}

fn expand(cover: &CoverProblem<'_>, free: &[usize], pick: impl Fn(usize, bool) -> usize, set: &[bool]) -> Vec<usize> {
    let mut choice: Vec<usize> = cover.elements.iter().map(|x| x.forced().unwrap_or(0)).collect();
    for (k, &i) in free.iter().enumerate() {
        choice[i] = pick(i, set[k]);
    }
    choice
}

/// Exact optimum on bipartite graphs. Sides come from a 2-coloring (the
/// lowest agent of each component on the first side); a free element in the
/// chosen set is dominated at its first-side endpoint. The cost then splits
/// into a submodular function of the set plus a submodular function of its
/// complement.
pub fn solve_bipartite(prob: &BriberyProblem) -> Result<BriberySolution, BriberyError> {
    let coloring = prob.graph.two_coloring().ok_or(BriberyError::NotBipartite)?;
    let cover = build_cover_problem(prob)?;
    cover.check_coverable()?;
    let free = cover.free();
    let first_side: Vec<usize> =
        cover.elements.iter().map(|x| usize::from(coloring[x.ends[0]])).collect();
    let pick = |i: usize, in_set: bool| if in_set { first_side[i] } else { 1 - first_side[i] };
    let best = minimize_submodular(free.len(), |set| cover.cost(&expand(&cover, &free, pick, set)))?;
    Ok(cover.realize(&expand(&cover, &free, pick, &best.set)))
}

/// Factor-2 approximation on any graph. Free elements are oriented from
/// their lower to their higher endpoint; the decoupled bound
/// `g'(X) = sum_v f_v(F_v + tails in X) + sum_v f_v(F_v + heads outside X)`
/// is submodular, satisfies `c <= g' <= 2c`, and is minimized exactly.
pub fn solve_2approx(prob: &BriberyProblem) -> Result<BriberySolution, BriberyError> {
    let cover = build_cover_problem(prob)?;
    cover.check_coverable()?;
    let free = cover.free();
    let n = prob.graph.agent_count();
    let forced: Vec<Vec<usize>> = {
        let mut f = vec![Vec::new(); n];
        for (i, x) in cover.elements.iter().enumerate() {
            if let Some(s) = x.forced() {
                f[x.ends[s]].push(i);
            }
        }
        f
    };
    let bound = |set: &[bool]| -> f64 {
        let mut low = forced.clone();
        let mut high = forced.clone();
        for (k, &i) in free.iter().enumerate() {
            let x = &cover.elements[i];
            if set[k] {
                low[x.ends[0]].push(i);
            } else {
                high[x.ends[1]].push(i);
            }
        }
        (0..n).map(|v| cover.vertex_cost(v, &low[v]) + cover.vertex_cost(v, &high[v])).sum()
    };
    let best = minimize_submodular(free.len(), bound)?;
    let pick = |_: usize, in_set: bool| usize::from(!in_set);
    let mut sol = cover.realize(&expand(&cover, &free, pick, &best.set));
    let lower_bound = cover.pre.clamp_cost + best.value / 2.0;
    let ratio = if lower_bound > 0.0 { sol.cost / lower_bound } else { 1.0 };
    sol.certificate = Some(Certificate { lower_bound, ratio });
    Ok(sol)
}

/// Optimum when matching values may not change: every blocking edge is
/// lowered, at its cheaper saturated endpoint, to that endpoint's worst
/// matching value. Ties go to the lower endpoint.
pub fn solve_frozen(prob: &BriberyProblem) -> Result<BriberySolution, BriberyError> {
    let pre = preprocess(prob)?;
    let g = &prob.graph;
    let mut values = pre.values.clone();
    let mut dominated_at = Vec::with_capacity(pre.blocking.len());
    for &e in &pre.blocking {
        let (a, b) = g.endpoints(e);
        let mut best: Option<(f64, AgentId, f64)> = None;
        for v in [a, b] {
            if !pre.saturated[v] {
                continue;
            }
            let floor = pre.at[v].iter().map(|&f| pre.values.get(g, v, f)).fold(f64::INFINITY, f64::min);
            if floor < prob.lower(v, e) {
                continue;
            }
            let c = prob.weight(v) * (pre.values.get(g, v, e) - floor).max(0.0);
            if best.is_none_or(|(bc, _, _)| c < bc) {
                best = Some((c, v, floor));
            }
        }
        let (_, v, floor) = best.ok_or_else(|| BriberyError::Infeasible(g.edge_label(e)))?;
        values.set(g, v, e, floor);
        dominated_at.push((e, v));
    }
    let cost = prob.cost_of(&values);
    let changes = prob.changes_to(&values);
    Ok(BriberySolution { values, cost, changes, dominated_at, certificate: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Graph, QMatching, ValueBounds};
    use crate::stability::is_stable;

    fn gadget(n: usize, edges: &[(usize, usize)]) -> BriberyProblem {
        // Agents 0..n are the primed copies, n..2n their pendants.
        let mut pairs: Vec<(usize, usize)> = edges.to_vec();
        pairs.extend((0..n).map(|i| (i, n + i)));
        let g = Graph::with_unit_capacity(2 * n, pairs).unwrap();
        let mut p = Values::uniform(&g, 1.0);
        let m: Vec<EdgeId> = (0..n).map(|i| g.edge_between(i, n + i).unwrap()).collect();
        for &e in &m {
            let (a, b) = g.endpoints(e);
            p.set(&g, a, e, 0.0);
            p.set(&g, b, e, 0.0);
        }
        BriberyProblem::new(g, p, QMatching::new(m))
    }

    fn assert_valid(prob: &BriberyProblem, sol: &BriberySolution) {
        assert!(is_stable(&prob.graph, &sol.values, &prob.matching).unwrap().is_stable());
        assert!((prob.cost_of(&sol.values) - sol.cost).abs() < 1e-9);
        assert!(prob.within_bounds(&sol.values, 1e-12));
    }

    #[test]
    fn single_edge_gadget_costs_one() {
        let prob = gadget(2, &[(0, 1)]);
        for sol in [solve_bipartite(&prob).unwrap(), solve_2approx(&prob).unwrap(), solve_frozen(&prob).unwrap()] {
            assert_valid(&prob, &sol);
            assert_eq!(sol.cost, 1.0);
        }
    }

    #[test]
    fn k22_gadget_costs_two() {
        let prob = gadget(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        let sol = solve_bipartite(&prob).unwrap();
        assert_valid(&prob, &sol);
        assert_eq!(sol.cost, 2.0);
    }

    #[test]
    fn triangle_gadget_is_not_bipartite_but_approximable() {
        let prob = gadget(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(matches!(solve_bipartite(&prob), Err(BriberyError::NotBipartite)));
        let sol = solve_2approx(&prob).unwrap();
        assert_valid(&prob, &sol);
        assert!(sol.cost <= 4.0 + 1e-9);
        let c = sol.certificate.unwrap();
        assert!(c.lower_bound <= 2.0 + 1e-9 && c.ratio <= 2.0 + 1e-9);
    }

    #[test]
    fn shared_vertex_is_strictly_submodular() {
        // Star: center 0 matched to 1 (value 3), stray edges to 2 (5) and 3 (4).
        let g = Graph::with_unit_capacity(6, [(0, 1), (0, 2), (0, 3), (2, 4), (3, 5)]).unwrap();
        let mut p = Values::uniform(&g, 10.0);
        p.set(&g, 0, g.edge_between(0, 1).unwrap(), 3.0);
        p.set(&g, 0, g.edge_between(0, 2).unwrap(), 5.0);
        p.set(&g, 0, g.edge_between(0, 3).unwrap(), 4.0);
        let m = QMatching::new(vec![0, g.edge_between(2, 4).unwrap(), g.edge_between(3, 5).unwrap()]);
        let mut prob = BriberyProblem::new(g.clone(), p, m);
        // Make 2 and 3 prefer the center so both stray edges block.
        prob.values.set(&g, 2, g.edge_between(2, 4).unwrap(), 0.0);
        prob.values.set(&g, 3, g.edge_between(3, 5).unwrap(), 0.0);
        let cover = build_cover_problem(&prob).unwrap();
        assert_eq!(cover.len(), 2);
        let center_both = cover.vertex_cost(0, &[0, 1]);
        let center_first = cover.vertex_cost(0, &[0]);
        let center_second = cover.vertex_cost(0, &[1]);
        assert_eq!((center_both, center_first, center_second), (2.0, 2.0, 1.0));
        assert!(center_both < center_first + center_second);
    }

    #[test]
    fn frozen_lowers_at_the_cheaper_endpoint() {
        // u=0 matched with value 3, w=1 matched with value 1, edge u-w valued 4 on both sides.
        let g = Graph::with_unit_capacity(4, [(0, 1), (0, 2), (1, 3)]).unwrap();
        let mut p = Values::uniform(&g, 0.0);
        p.set(&g, 0, 1, 3.0);
        p.set(&g, 1, 2, 1.0);
        p.set(&g, 0, 0, 4.0);
        p.set(&g, 1, 0, 4.0);
        let prob = BriberyProblem::new(g.clone(), p, QMatching::new(vec![1, 2]));
        let sol = solve_frozen(&prob).unwrap();
        assert_valid(&prob, &sol);
        assert_eq!(sol.cost, 1.0);
        assert_eq!(sol.dominated_at, vec![(0, 0)]);
    }

    #[test]
    fn frozen_tie_goes_to_lower_endpoint() {
        let prob = gadget(2, &[(0, 1)]);
        assert_eq!(solve_frozen(&prob).unwrap().dominated_at, vec![(0, 0)]);
    }

    #[test]
    fn no_blocking_edges_cost_nothing() {
        let g = Graph::with_unit_capacity(2, [(0, 1)]).unwrap();
        let prob = BriberyProblem::new(g.clone(), Values::uniform(&g, 1.0), QMatching::new(vec![0]));
        for sol in [solve_bipartite(&prob).unwrap(), solve_2approx(&prob).unwrap(), solve_frozen(&prob).unwrap()] {
            assert_eq!(sol.cost, 0.0);
            assert!(sol.changes.is_empty());
            assert_eq!(sol.values, prob.values);
        }
    }

    #[test]
    fn bounds_can_force_the_other_endpoint() {
        let mut prob = gadget(2, &[(0, 1)]);
        let g = prob.graph.clone();
        let e = g.edge_between(0, 1).unwrap();
        let f = g.edge_between(0, 2).unwrap();
        let mut b = ValueBounds::unbounded(&g);
        // Agent 0 may not lower the stray edge and may not raise its matching edge.
        b.set(&g, 0, e, 1.0, 1.0).unwrap();
        b.set(&g, 0, f, 0.0, 0.0).unwrap();
        prob.bounds = Some(b);
        let sol = solve_bipartite(&prob).unwrap();
        assert_eq!(sol.dominated_at, vec![(e, 1)]);
        assert_valid(&prob, &sol);
    }

    #[test]
    fn bounds_on_both_sides_make_it_infeasible() {
        let mut prob = gadget(2, &[(0, 1)]);
        let g = prob.graph.clone();
        let mut b = ValueBounds::unbounded(&g);
        for v in [0, 1] {
            b.set(&g, v, 0, 1.0, 1.0).unwrap();
            let f = g.edge_between(v, v + 2).unwrap();
            b.set(&g, v, f, 0.0, 0.0).unwrap();
        }
        prob.bounds = Some(b);
        assert!(matches!(solve_bipartite(&prob), Err(BriberyError::Infeasible(_))));
        assert!(matches!(solve_frozen(&prob), Err(BriberyError::Infeasible(_))));
    }

    #[test]
    fn weights_shift_the_choice() {
        let mut prob = gadget(2, &[(0, 1)]);
        prob.weights = Some(vec![3.0, 1.0, 1.0, 1.0]);
        let sol = solve_bipartite(&prob).unwrap();
        assert_eq!(sol.cost, 1.0);
        assert_eq!(sol.dominated_at, vec![(0, 1)]);
    }
}
