use std::collections::HashSet;

use crate::instance::{AgentId, EdgeId, Graph};
use crate::parse::Color;

use super::ExtensionError;

/// Largest number of red edges searched by default.
pub const DEFAULT_RED_CAP: usize = 1000;

/// A bipartite graph with every edge colored red or blue.
#[derive(Clone, Debug, PartialEq)]
pub struct RedBlueInstance {
    pub graph: Graph,
    pub colors: Vec<Color>,
}

impl RedBlueInstance {
    /// Checks bipartiteness and that every edge has a color.
    pub fn new(graph: Graph, colors: Vec<Option<Color>>) -> Result<Self, ExtensionError> {
        if graph.two_coloring().is_none() {
            return Err(ExtensionError::NotBipartite);
        }
        let mut out = Vec::with_capacity(colors.len());
        for e in 0..graph.edge_count() {
            match colors.get(e).copied().flatten() {
                Some(c) => out.push(c),
                None => return Err(ExtensionError::Uncolored(graph.edge_label(e))),
            }
        }
        Ok(RedBlueInstance { graph, colors: out })
    }

    pub fn red(&self) -> Vec<EdgeId> {
        (0..self.colors.len()).filter(|&e| self.colors[e] == Color::Red).collect()
    }

    pub fn blue(&self) -> Vec<EdgeId> {
        (0..self.colors.len()).filter(|&e| self.colors[e] == Color::Blue).collect()
    }

    /// Whether `m` is a matching of red edges touching every blue edge.
    pub fn is_cover(&self, m: &[EdgeId]) -> bool {
        let g = &self.graph;
        let mut hit = vec![false; g.agent_count()];
        for &e in m {
            if self.colors.get(e) != Some(&Color::Red) {
                return false;
            }
            let (a, b) = g.endpoints(e);
            if hit[a] || hit[b] {
                return false;
            }
            hit[a] = true;
            hit[b] = true;
        }
        self.blue().into_iter().all(|e| {
            let (a, b) = g.endpoints(e);
            hit[a] || hit[b]
        })
    }
}

/// Finds a matching of red edges whose endpoints touch every blue edge, or
/// `None` if there is none. Red edges come back in ascending order.
///
/// The search decides, blue edge by blue edge, which endpoint has to be
/// matched. Whether a set of vertices can be covered by one red matching is
/// a bipartite matching question, so every partial decision is checked
/// exactly; an endpoint whose addition fails that check forces the other one.
pub fn red_blue_cover(rb: &RedBlueInstance, cap: usize) -> Result<Option<Vec<EdgeId>>, ExtensionError> {
    let g = &rb.graph;
    let red = rb.red();
    if red.len() > cap {
        return Err(ExtensionError::CapExceeded { size: red.len(), cap });
    }
    let mut red_at = vec![Vec::new(); g.agent_count()];
    for &e in &red {
        let (a, b) = g.endpoints(e);
        red_at[a].push(e);
        red_at[b].push(e);
    }
    let mut s = Search {
        rb,
        red_at,
        blue: rb.blue(),
        failed: HashSet::new(),
    };
    let n = g.agent_count();
    let Some(need) = s.run(vec![false; n], vec![None; n]) else { return Ok(None) };
    let mate = s.cover(&need).expect("search returns coverable sets");
    let mut m: Vec<EdgeId> = g
        .agents()
        .filter_map(|v| mate[v].filter(|&u| v < u).map(|u| g.edge_between(v, u).expect("mates are adjacent")))
        .collect();
    m.sort_unstable();
    debug_assert!(rb.is_cover(&m));
    Ok(Some(m))
}

struct Search<'a> {
    rb: &'a RedBlueInstance,
    red_at: Vec<Vec<EdgeId>>,
    blue: Vec<EdgeId>,
    failed: HashSet<Vec<bool>>,
}

impl Search<'_> {
    /// A red matching (as mates) covering every needed vertex, if any.
    fn cover(&self, need: &[bool]) -> Option<Vec<Option<AgentId>>> {
        let mut mate = vec![None; need.len()];
        for v in (0..need.len()).filter(|&v| need[v]) {
            if !self.extend(&mut mate, need, v) {
                return None;
            }
        }
        Some(mate)
    }

    /// Changes `mate`, which covers the needed vertices, into a matching
    /// that also covers `v`. Follows an alternating path from `v` to a free
    /// vertex, or to a matched vertex on `v`'s side that is not needed and
    /// gets dropped. Comparing with any matching that covers the needed
    /// vertices and `v` shows that such a path exists whenever one is
    /// possible, so a `false` answer is exact.
    fn extend(&self, mate: &mut [Option<AgentId>], need: &[bool], v: AgentId) -> bool {
        if mate[v].is_some() {
            return true;
        }
        let g = &self.rb.graph;
        let n = mate.len();
        let mut seen = vec![false; n];
        let mut parent = vec![0; n];
        let mut via: Vec<Option<AgentId>> = vec![None; n];
        let mut queue = std::collections::VecDeque::from([v]);
        let mut end = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for &e in &self.red_at[x] {
                let u = g.other(e, x);
                if seen[u] {
                    continue;
                }
                seen[u] = true;
                parent[u] = x;
                match mate[u] {
                    None => {
                        end = Some(u);
                        break 'bfs;
                    }
                    Some(y) if !need[y] => {
                        mate[y] = None;
                        end = Some(u);
                        break 'bfs;
                    }
                    Some(y) => {
                        via[y] = Some(u);
                        queue.push_back(y);
                    }
                }
            }
        }
        let Some(mut u) = end else { return false };
        loop {
            let x = parent[u];
            mate[u] = Some(x);
            mate[x] = Some(u);
            match via[x] {
                Some(p) if x != v => u = p,
                _ => return true,
            }
        }
    }

    fn with(&self, need: &[bool], mate: &[Option<AgentId>], v: AgentId) -> bool {
        mate[v].is_some() || self.extend(&mut mate.to_vec(), need, v)
    }

    /// Forces endpoints until no single addition fails; `false` on conflict.
    fn propagate(&self, need: &mut [bool], mate: &mut [Option<AgentId>]) -> bool {
        let g = &self.rb.graph;
        loop {
            let mut changed = false;
            for &e in &self.blue {
                let (a, b) = g.endpoints(e);
                if need[a] || need[b] {
                    continue;
                }
                let forced = match (self.with(need, mate, a), self.with(need, mate, b)) {
                    (false, false) => return false,
                    (true, false) => a,
                    (false, true) => b,
                    (true, true) => continue,
                };
                let ok = self.extend(mate, need, forced);
                debug_assert!(ok);
                need[forced] = true;
                changed = true;
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&mut self, mut need: Vec<bool>, mut mate: Vec<Option<AgentId>>) -> Option<Vec<bool>> {
        if self.failed.contains(&need) {
            return None;
        }
        let start = need.clone();
        if !self.propagate(&mut need, &mut mate) {
            self.failed.insert(start);
            return None;
        }
        let g = &self.rb.graph;
        let free = |f: EdgeId| {
            let (x, y) = g.endpoints(f);
            mate[x].is_none() && mate[y].is_none()
        };
        // Fail-first: the open blue edge with the fewest free red edges at its ends.
        let open = self
            .blue
            .iter()
            .map(|&e| (e, g.endpoints(e)))
            .filter(|&(_, (a, b))| !need[a] && !need[b])
            .min_by_key(|&(e, (a, b))| {
                (self.red_at[a].iter().chain(&self.red_at[b]).filter(|&&f| free(f)).count(), e)
            });
        let Some((_, (a, b))) = open else { return Some(need) };
        for v in [a, b] {
            let mut next = mate.clone();
            if !self.extend(&mut next, &need, v) {
                continue;
            }
            let mut more = need.clone();
            more[v] = true;
            if let Some(done) = self.run(more, next) {
                return Some(done);
            }
        }
        self.failed.insert(start);
        None
    }
}
