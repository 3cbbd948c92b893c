//! Instance model: the simple graph with capacities, the three preference
//! encodings and q-matchings.
//!
//! Agents are identified by their index in declaration order; that index is
//! the "id" used for every lowest-id tie-break in the crate. Edges are stored
//! canonically as `(min, max)` pairs sorted lexicographically, so edge ids
//! order edges the same way the pairs do.

use std::collections::HashMap;

use crate::error::CoreError;

pub type AgentId = usize;
pub type EdgeId = usize;

/// Strictness tolerance for real-valued preferences.
pub const TAU: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    names: Vec<String>,
    capacity: Vec<u32>,
    edges: Vec<(AgentId, AgentId)>,
    incident: Vec<Vec<EdgeId>>,
    lookup: HashMap<(AgentId, AgentId), EdgeId>,
}

impl Graph {
    /// Builds a graph from agent names, capacities and endpoint pairs.
    /// Pairs may be given in any order and orientation.
    pub fn new(
        names: Vec<String>,
        capacity: Vec<u32>,
        pairs: impl IntoIterator<Item = (AgentId, AgentId)>,
    ) -> Result<Self, CoreError> {
        let n = names.len();
        if capacity.len() != n {
            return Err(CoreError::CapacityLength { expected: n, got: capacity.len() });
        }
        if let Some(v) = capacity.iter().position(|&q| q == 0) {
            return Err(CoreError::ZeroCapacity(names[v].clone()));
        }
        let mut seen = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(CoreError::DuplicateAgent(name.clone()));
            }
        }
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if u >= n || v >= n {
                return Err(CoreError::UnknownAgentIndex(u.max(v)));
            }
            if u == v {
                return Err(CoreError::SelfLoop(names[u].clone()));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            let (a, b) = w[0];
            return Err(CoreError::DuplicateEdge(names[a].clone(), names[b].clone()));
        }
        let mut incident = vec![Vec::new(); n];
        let mut lookup = HashMap::with_capacity(edges.len());
        for (e, &(a, b)) in edges.iter().enumerate() {
            incident[a].push(e);
            incident[b].push(e);
            lookup.insert((a, b), e);
        }
        Ok(Graph { names, capacity, edges, incident, lookup })
    }

    /// Unit-capacity graph with agents named `0..n`.
    pub fn with_unit_capacity(
        n: usize,
        pairs: impl IntoIterator<Item = (AgentId, AgentId)>,
    ) -> Result<Self, CoreError> {
        let names = (0..n).map(|i| i.to_string()).collect();
        Graph::new(names, vec![1; n], pairs)
    }

    pub fn agent_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn agents(&self) -> std::ops::Range<AgentId> {
        0..self.names.len()
    }

    pub fn name(&self, v: AgentId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<AgentId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn capacity(&self, v: AgentId) -> u32 {
        self.capacity[v]
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacity
    }

    pub fn unit_capacity(&self) -> bool {
        self.capacity.iter().all(|&q| q == 1)
    }

    pub fn edges(&self) -> &[(AgentId, AgentId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (AgentId, AgentId) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: AgentId) -> AgentId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// 0 when `v` is the lower endpoint of `e`, 1 otherwise.
    pub fn side(&self, e: EdgeId, v: AgentId) -> usize {
        usize::from(self.edges[e].0 != v)
    }

    pub fn incident(&self, v: AgentId) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn degree(&self, v: AgentId) -> usize {
        self.incident[v].len()
    }

    pub fn neighbors(&self, v: AgentId) -> impl Iterator<Item = AgentId> + '_ {
        self.incident[v].iter().map(move |&e| self.other(e, v))
    }

    pub fn edge_between(&self, u: AgentId, v: AgentId) -> Option<EdgeId> {
        self.lookup.get(&(u.min(v), u.max(v))).copied()
    }

    /// Human-readable `a-b` label of an edge.
    pub fn edge_label(&self, e: EdgeId) -> String {
        let (a, b) = self.edges[e];
        format!("{}-{}", self.names[a], self.names[b])
    }

    /// Proper 2-coloring (`false` = first side) if the graph is bipartite.
    /// The lowest-id agent of every component gets `false`.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let n = self.agent_count();
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut stack = Vec::new();
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            stack.push(s);
            while let Some(v) = stack.pop() {
                let c = color[v].unwrap();
                for w in self.neighbors(v) {
                    match color[w] {
                        None => {
                            color[w] = Some(!c);
                            stack.push(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    /// Graph induced on the agents not flagged in `removed`. Returns the new
    /// graph, the old→new agent map and the new→old edge map.
    pub fn without_agents(&self, removed: &[bool]) -> (Graph, Vec<Option<AgentId>>, Vec<EdgeId>) {
        let mut map = vec![None; self.agent_count()];
        let mut names = Vec::new();
        let mut capacity = Vec::new();
        for v in self.agents() {
            if !removed[v] {
                map[v] = Some(names.len());
                names.push(self.names[v].clone());
                capacity.push(self.capacity[v]);
            }
        }
        let mut kept = Vec::new();
        let mut pairs = Vec::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if let (Some(x), Some(y)) = (map[a], map[b]) {
                kept.push(e);
                pairs.push((x, y));
            }
        }
        // `map` is monotone, so the canonical order of the kept edges is unchanged.
        let g = Graph::new(names, capacity, pairs).expect("induced subgraph of a valid graph");
        (g, map, kept)
    }
}

/// Real-valued preferences `p_v(e)`, one value per (edge, endpoint).
#[derive(Clone, Debug, PartialEq)]
pub struct Values {
    p: Vec<[f64; 2]>,
}

impl Values {
    /// All values set to `fill`.
    pub fn uniform(g: &Graph, fill: f64) -> Self {
        Values { p: vec![[fill; 2]; g.edge_count()] }
    }

    /// From raw per-edge pairs `[p_low(e), p_high(e)]`.
    pub fn from_pairs(g: &Graph, p: Vec<[f64; 2]>) -> Result<Self, CoreError> {
        if p.len() != g.edge_count() {
            return Err(CoreError::ValueLength { expected: g.edge_count(), got: p.len() });
        }
        if let Some(e) = p.iter().position(|pair| pair.iter().any(|x| !x.is_finite() || *x < 0.0)) {
            return Err(CoreError::InvalidValue(g.edge_label(e)));
        }
        Ok(Values { p })
    }

    pub fn get(&self, g: &Graph, v: AgentId, e: EdgeId) -> f64 {
        self.p[e][g.side(e, v)]
    }

    pub fn set(&mut self, g: &Graph, v: AgentId, e: EdgeId, value: f64) {
        self.p[e][g.side(e, v)] = value;
    }

    pub fn pairs(&self) -> &[[f64; 2]] {
        &self.p
    }
}

/// Strict total orders on neighborhoods, possibly given only for some agents.
#[derive(Clone, Debug, PartialEq)]
pub struct StrictOrders {
    lists: Vec<Option<Vec<AgentId>>>,
    /// Per (edge, side): `deg - position`, so larger is better. 0 when absent.
    score: Vec<[u32; 2]>,
}

impl StrictOrders {
    /// `lists[v]` is `v`'s order, best first, or `None` when not given.
    /// Isolated agents always get an empty list.
    pub fn new(g: &Graph, mut lists: Vec<Option<Vec<AgentId>>>) -> Result<Self, CoreError> {
        if lists.len() != g.agent_count() {
            return Err(CoreError::OrderLength { expected: g.agent_count(), got: lists.len() });
        }
        for v in g.agents().filter(|&v| g.degree(v) == 0) {
            lists[v].get_or_insert_with(Vec::new);
        }
        let mut score = vec![[0u32; 2]; g.edge_count()];
        for (v, list) in lists.iter().enumerate() {
            let Some(list) = list else { continue };
            if list.len() != g.degree(v) {
                return Err(CoreError::NotAPermutation(g.name(v).to_string()));
            }
            let deg = list.len() as u32;
            for (pos, &u) in list.iter().enumerate() {
                let e = g
                    .edge_between(v, u)
                    .ok_or_else(|| CoreError::NotAPermutation(g.name(v).to_string()))?;
                let slot = &mut score[e][g.side(e, v)];
                if *slot != 0 {
                    return Err(CoreError::NotAPermutation(g.name(v).to_string()));
                }
                *slot = deg - pos as u32;
            }
        }
        Ok(StrictOrders { lists, score })
    }

    /// Complete orders from full lists.
    pub fn complete(g: &Graph, lists: Vec<Vec<AgentId>>) -> Result<Self, CoreError> {
        Self::new(g, lists.into_iter().map(Some).collect())
    }

    pub fn list(&self, v: AgentId) -> Option<&[AgentId]> {
        self.lists[v].as_deref()
    }

    pub fn lists(&self) -> &[Option<Vec<AgentId>>] {
        &self.lists
    }

    /// Higher is better; only meaningful when `v` has a list.
    pub fn score(&self, g: &Graph, v: AgentId, e: EdgeId) -> u32 {
        self.score[e][g.side(e, v)]
    }

    pub fn is_complete(&self, g: &Graph) -> bool {
        g.agents().all(|v| self.lists[v].is_some() || g.degree(v) == 0)
    }

    pub fn require_complete(&self, g: &Graph) -> Result<(), CoreError> {
        match g.agents().find(|&v| self.lists[v].is_none() && g.degree(v) > 0) {
            Some(v) => Err(CoreError::MissingOrder(g.name(v).to_string())),
            None => Ok(()),
        }
    }
}

/// Partial rank assignment: positions counted from the worst edge (1 = worst).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranks {
    r: Vec<[Option<u32>; 2]>,
}

impl Ranks {
    pub fn empty(g: &Graph) -> Self {
        Ranks { r: vec![[None; 2]; g.edge_count()] }
    }

    pub fn get(&self, g: &Graph, v: AgentId, e: EdgeId) -> Option<u32> {
        self.r[e][g.side(e, v)]
    }

    /// Fixes `r_v(e)`, rejecting out-of-range and duplicate positions.
    pub fn set(&mut self, g: &Graph, v: AgentId, e: EdgeId, rank: u32) -> Result<(), CoreError> {
        let deg = g.degree(v) as u32;
        if rank < 1 || rank > deg {
            return Err(CoreError::RankOutOfRange {
                agent: g.name(v).to_string(),
                rank,
                degree: deg as usize,
            });
        }
        if let Some(&f) =
            g.incident(v).iter().find(|&&f| f != e && self.r[f][g.side(f, v)] == Some(rank))
        {
            return Err(CoreError::DuplicateRank {
                agent: g.name(v).to_string(),
                rank,
                edge: g.edge_label(f),
            });
        }
        self.r[e][g.side(e, v)] = Some(rank);
        Ok(())
    }

    pub fn is_complete(&self, g: &Graph) -> bool {
        g.agents().all(|v| g.incident(v).iter().all(|&e| self.get(g, v, e).is_some()))
    }

    /// Fills every unassigned position: free positions ascending go to the
    /// unassigned edges ascending by edge id.
    pub fn filled(&self, g: &Graph) -> Ranks {
        let mut out = self.clone();
        for v in g.agents() {
            let deg = g.degree(v) as u32;
            let used: Vec<u32> = g.incident(v).iter().filter_map(|&e| self.get(g, v, e)).collect();
            let mut free = (1..=deg).filter(|k| !used.contains(k));
            for &e in g.incident(v) {
                if self.get(g, v, e).is_none() {
                    out.r[e][g.side(e, v)] = free.next();
                }
            }
        }
        out
    }

    /// Strict orders induced by the ranks after filling unassigned positions.
    pub fn to_orders(&self, g: &Graph) -> StrictOrders {
        let full = self.filled(g);
        let lists = g
            .agents()
            .map(|v| {
                let mut inc: Vec<EdgeId> = g.incident(v).to_vec();
                inc.sort_by_key(|&e| std::cmp::Reverse(full.get(g, v, e)));
                Some(inc.into_iter().map(|e| g.other(e, v)).collect())
            })
            .collect();
        StrictOrders::new(g, lists).expect("filled ranks form permutations")
    }
}

/// Edge set with per-agent degree at most the capacity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMatching {
    edges: Vec<EdgeId>,
}

impl QMatching {
    /// Sorted, deduplicated edge set. Feasibility is checked against a graph
    /// by [`QMatching::check`].
    pub fn new(mut edges: Vec<EdgeId>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        QMatching { edges }
    }

    pub fn empty() -> Self {
        QMatching::default()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Edge membership flags for `g`.
    pub fn mask(&self, g: &Graph) -> Vec<bool> {
        let mut mask = vec![false; g.edge_count()];
        for &e in &self.edges {
            mask[e] = true;
        }
        mask
    }

    /// Matching edges at every agent.
    pub fn at(&self, g: &Graph) -> Vec<Vec<EdgeId>> {
        let mut at = vec![Vec::new(); g.agent_count()];
        for &e in &self.edges {
            let (a, b) = g.endpoints(e);
            at[a].push(e);
            at[b].push(e);
        }
        at
    }

    /// Verifies edge ids and degree bounds against `g`.
    pub fn check(&self, g: &Graph) -> Result<(), CoreError> {
        let mut deg = vec![0u32; g.agent_count()];
        for &e in &self.edges {
            if e >= g.edge_count() {
                return Err(CoreError::UnknownEdge(e));
            }
            let (a, b) = g.endpoints(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        match g.agents().find(|&v| deg[v] > g.capacity(v)) {
            Some(v) => Err(CoreError::NotQMatching(g.name(v).to_string())),
            None => Ok(()),
        }
    }

    /// Saturation flags (`|M(v)| = q(v)`).
    pub fn saturated(&self, g: &Graph) -> Vec<bool> {
        let at = self.at(g);
        g.agents().map(|v| at[v].len() as u32 >= g.capacity(v)).collect()
    }
}

/// Per (edge, endpoint) value interval `[lo, hi]`; defaults to `[0, inf)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueBounds {
    lo: Vec<[f64; 2]>,
    hi: Vec<[f64; 2]>,
}

impl ValueBounds {
    pub fn unbounded(g: &Graph) -> Self {
        ValueBounds {
            lo: vec![[0.0; 2]; g.edge_count()],
            hi: vec![[f64::INFINITY; 2]; g.edge_count()],
        }
    }

    pub fn lower(&self, g: &Graph, v: AgentId, e: EdgeId) -> f64 {
        self.lo[e][g.side(e, v)]
    }

    pub fn upper(&self, g: &Graph, v: AgentId, e: EdgeId) -> f64 {
        self.hi[e][g.side(e, v)]
    }

    pub fn set(
        &mut self,
        g: &Graph,
        v: AgentId,
        e: EdgeId,
        lo: f64,
        hi: f64,
    ) -> Result<(), CoreError> {
        if !(lo >= 0.0 && lo <= hi && lo.is_finite()) || hi.is_nan() {
            return Err(CoreError::InvalidValue(g.edge_label(e)));
        }
        let s = g.side(e, v);
        self.lo[e][s] = lo;
        self.hi[e][s] = hi;
        Ok(())
    }
}

/// Per (edge, endpoint) lower bound on the rank-from-worst; defaults to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBounds {
    l: Vec<[u32; 2]>,
}

impl RankBounds {
    pub fn trivial(g: &Graph) -> Self {
        RankBounds { l: vec![[1; 2]; g.edge_count()] }
    }

    pub fn get(&self, g: &Graph, v: AgentId, e: EdgeId) -> u32 {
        self.l[e][g.side(e, v)]
    }

    pub fn set(&mut self, g: &Graph, v: AgentId, e: EdgeId, l: u32) -> Result<(), CoreError> {
        let deg = g.degree(v) as u32;
        if l < 1 || l > deg {
            return Err(CoreError::RankOutOfRange {
                agent: g.name(v).to_string(),
                rank: l,
                degree: deg as usize,
            });
        }
        self.l[e][g.side(e, v)] = l;
        Ok(())
    }

    pub fn is_trivial(&self) -> bool {
        self.l.iter().all(|pair| pair == &[1, 1])
    }
}
