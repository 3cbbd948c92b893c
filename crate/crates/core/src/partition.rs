//! Stable partitions, minimum agent deletion and subset deletion for unit
//! capacity instances with strict preferences.

use std::collections::VecDeque;

use thiserror::Error;

use crate::error::CoreError;
use crate::instance::{AgentId, EdgeId, Graph, QMatching, StrictOrders};

/// Default limit on `|T|` for [`subset_removable`].
pub const DEFAULT_SUBSET_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("stable partitions need unit capacities")]
    NotUnitCapacity,
    #[error("permutation is not a bijection on the agents")]
    NotBijection,
    #[error("candidate set has {size} agents, cap is {cap}")]
    CapExceeded { size: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePartition {
    pub pi: Vec<AgentId>,
    /// All cycles, each starting at its lowest agent and following `pi`;
    /// sorted by first agent. Singletons appear as 1-cycles.
    pub cycles: Vec<Vec<AgentId>>,
    /// Cycles of odd length at least 3.
    pub odd_cycles: Vec<Vec<AgentId>>,
    pub singletons: Vec<AgentId>,
}

impl StablePartition {
    pub fn from_permutation(pi: Vec<AgentId>) -> Result<Self, PartitionError> {
        let n = pi.len();
        let mut hit = vec![false; n];
        for &x in &pi {
            if x >= n || std::mem::replace(&mut hit[x], true) {
                return Err(PartitionError::NotBijection);
            }
        }
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = pi[x];
            }
            cycles.push(c);
        }
        let odd_cycles = cycles.iter().filter(|c| c.len() >= 3 && c.len() % 2 == 1).cloned().collect();
        let singletons = (0..n).filter(|&u| pi[u] == u).collect();
        Ok(StablePartition { pi, cycles, odd_cycles, singletons })
    }

    pub fn inverse(&self) -> Vec<AgentId> {
        let mut inv = vec![0; self.pi.len()];
        for (u, &x) in self.pi.iter().enumerate() {
            inv[x] = u;
        }
        inv
    }

    /// Lengths of the odd cycles, ascending.
    pub fn odd_cycle_lengths(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.odd_cycles.iter().map(Vec::len).collect();
        l.sort_unstable();
        l
    }
}

fn require_unit_orders(g: &Graph, orders: &StrictOrders) -> Result<(), PartitionError> {
    if orders.lists().len() != g.agent_count() {
        return Err(CoreError::GraphMismatch.into());
    }
    orders.require_complete(g)?;
    if !g.unit_capacity() {
        return Err(PartitionError::NotUnitCapacity);
    }
    Ok(())
}

/// Why a permutation fails to be a stable partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionViolation {
    /// `u` and its successor or predecessor `v` are not adjacent, or `u`
    /// does not prefer its successor to its predecessor.
    Cycle { u: AgentId, v: AgentId },
    /// Edge `uv` would block: `u` is a singleton or prefers `v` to its
    /// predecessor, and `v` does not prefer its predecessor to `u`.
    Edge { u: AgentId, v: AgentId },
}

/// Checks both defining conditions of a stable partition. Returns the first
/// violation found scanning agents by id, or `None` when `pi` is valid.
///
/// In the second condition the successor `pi(u)` itself is exempt, since
/// `pi^-1(pi(u)) = u` can never be strictly better than `u` for `pi(u)`.
pub fn verify_partition(
    g: &Graph,
    orders: &StrictOrders,
    pi: &[AgentId],
) -> Result<Option<PartitionViolation>, PartitionError> {
    require_unit_orders(g, orders)?;
    if pi.len() != g.agent_count() {
        return Err(PartitionError::NotBijection);
    }
    let sp = StablePartition::from_permutation(pi.to_vec())?;
    let inv = sp.inverse();
    let score = |v: AgentId, u: AgentId| -> Option<u32> {
        g.edge_between(v, u).map(|e| orders.score(g, v, e))
    };
    for u in g.agents() {
        let (next, prev) = (pi[u], inv[u]);
        if next != u {
            for w in [next, prev] {
                if score(u, w).is_none() {
                    return Ok(Some(PartitionViolation::Cycle { u, v: w }));
                }
            }
            if next != prev && score(u, next) <= score(u, prev) {
                return Ok(Some(PartitionViolation::Cycle { u, v: next }));
            }
        }
        for &e in g.incident(u) {
            let v = g.other(e, u);
            if next != u && v == next {
                continue;
            }
            let trigger = next == u || orders.score(g, u, e) > score(u, prev).unwrap();
            if !trigger {
                continue;
            }
            let ok = inv[v] != v && score(v, inv[v]).unwrap() > orders.score(g, v, e);
            if !ok {
                return Ok(Some(PartitionViolation::Edge { u, v }));
            }
        }
    }
    Ok(None)
}

/// Irving-style reduction table: preference lists with deletions.
struct Table<'a> {
    g: &'a Graph,
    lists: Vec<Vec<AgentId>>,
    /// `pos[e][side]`: position of the other endpoint in this endpoint's list.
    pos: Vec<[usize; 2]>,
    alive: Vec<Vec<bool>>,
    len: Vec<usize>,
    head: Vec<usize>,
    tail: Vec<usize>,
}

impl<'a> Table<'a> {
    fn new(g: &'a Graph, orders: &StrictOrders) -> Self {
        let lists: Vec<Vec<AgentId>> =
            g.agents().map(|v| orders.list(v).map(<[_]>::to_vec).unwrap_or_default()).collect();
        let mut pos = vec![[0; 2]; g.edge_count()];
        for v in g.agents() {
            for (i, &u) in lists[v].iter().enumerate() {
                let e = g.edge_between(v, u).unwrap();
                pos[e][g.side(e, v)] = i;
            }
        }
        let alive = lists.iter().map(|l| vec![true; l.len()]).collect();
        let len: Vec<usize> = lists.iter().map(Vec::len).collect();
        let tail = len.clone();
        Table { g, lists, pos, alive, len, head: vec![0; g.agent_count()], tail }
    }

    fn position(&self, v: AgentId, u: AgentId) -> usize {
        let e = self.g.edge_between(v, u).unwrap();
        self.pos[e][self.g.side(e, v)]
    }

    fn first(&mut self, v: AgentId) -> Option<AgentId> {
        while self.head[v] < self.lists[v].len() && !self.alive[v][self.head[v]] {
            self.head[v] += 1;
        }
        self.lists[v].get(self.head[v]).copied()
    }

    fn second(&mut self, v: AgentId) -> Option<AgentId> {
        self.first(v)?;
        let mut i = self.head[v] + 1;
        while i < self.lists[v].len() && !self.alive[v][i] {
            i += 1;
        }
        self.lists[v].get(i).copied()
    }

    fn last(&mut self, v: AgentId) -> Option<AgentId> {
        while self.tail[v] > 0 && !self.alive[v][self.tail[v] - 1] {
            self.tail[v] -= 1;
        }
        if self.tail[v] == 0 {
            None
        } else {
            Some(self.lists[v][self.tail[v] - 1])
        }
    }

    fn delete(&mut self, a: AgentId, b: AgentId) {
        let (i, j) = (self.position(a, b), self.position(b, a));
        if self.alive[a][i] {
            self.alive[a][i] = false;
            self.alive[b][j] = false;
            self.len[a] -= 1;
            self.len[b] -= 1;
        }
    }

    /// Deletes every pair `(y, w)` with `w` strictly after `x` in `y`'s list.
    /// Returns the agents that lost an entry.
    fn truncate_after(&mut self, y: AgentId, x: AgentId) -> Vec<AgentId> {
        let start = self.position(y, x) + 1;
        let mut dropped = Vec::new();
        for i in start..self.lists[y].len() {
            if self.alive[y][i] {
                let w = self.lists[y][i];
                self.delete(y, w);
                dropped.push(w);
            }
        }
        dropped
    }
}

/// Computes a stable partition of a unit-capacity instance with strict
/// orders. Proposals follow ascending agent ids; afterwards rotations are
/// eliminated, always starting from the lowest agent whose reduced list has
/// at least three entries, until every list has at most two entries.
pub fn stable_partition(g: &Graph, orders: &StrictOrders) -> Result<StablePartition, PartitionError> {
    require_unit_orders(g, orders)?;
    let mut t = Table::new(g, orders);

    // Proposal phase.
    let mut queue: VecDeque<AgentId> = g.agents().collect();
    while let Some(x) = queue.pop_front() {
        let Some(y) = t.first(x) else { continue };
        // Every entry still alive in y's list is at least as good as its
        // current holder, so y accepts x and drops everyone worse.
        for w in t.truncate_after(y, x) {
            queue.push_back(w);
        }
    }

    // Rotation elimination.
    while let Some(start) = g.agents().find(|&v| t.len[v] >= 3) {
        let mut order = vec![usize::MAX; g.agent_count()];
        let mut seq: Vec<AgentId> = Vec::new();
        let mut x = start;
        while order[x] == usize::MAX {
            order[x] = seq.len();
            seq.push(x);
            let y = t.second(x).expect("agent on a rotation path has two entries");
            x = t.last(y).expect("second choice holds someone");
        }
        let xs = &seq[order[x]..];
        let ys: Vec<AgentId> = xs.iter().map(|&xi| t.second(xi).unwrap()).collect();
        for (&xi, &yi) in xs.iter().zip(&ys) {
            // The second choice of x_i takes x_i and rejects everyone worse.
            t.truncate_after(yi, xi);
        }
    }

    let pi = g.agents().map(|v| t.first(v).unwrap_or(v)).collect();
    StablePartition::from_permutation(pi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionResult {
    /// Deleted agents, ascending.
    pub removed: Vec<AgentId>,
    /// Stable matching of the graph without `removed`, as edge ids of the
    /// original graph.
    pub matching: QMatching,
}

/// Minimum set of agents whose removal leaves an instance with a stable
/// matching, together with that matching. One agent (the lowest) is removed
/// from each odd cycle; the remaining cycle agents are paired along the cycle.
pub fn min_removable_set(g: &Graph, orders: &StrictOrders) -> Result<DeletionResult, PartitionError> {
    let sp = stable_partition(g, orders)?;
    let mut removed = Vec::new();
    let mut edges: Vec<EdgeId> = Vec::new();
    let edge = |a: AgentId, b: AgentId| g.edge_between(a, b).expect("consecutive cycle agents are adjacent");
    for c in &sp.cycles {
        match c.len() {
            1 => {}
            len if len % 2 == 1 => {
                removed.push(c[0]);
                edges.extend(c[1..].chunks(2).map(|p| edge(p[0], p[1])));
            }
            _ => edges.extend(c.chunks(2).map(|p| edge(p[0], p[1]))),
        }
    }
    removed.sort_unstable();
    Ok(DeletionResult { removed, matching: QMatching::new(edges) })
}

/// Restriction of `orders` to the graph without the flagged agents.
pub fn restrict_orders(
    g: &Graph,
    orders: &StrictOrders,
    removed: &[bool],
) -> (Graph, StrictOrders, Vec<Option<AgentId>>, Vec<EdgeId>) {
    let (h, map, kept) = g.without_agents(removed);
    let lists = g
        .agents()
        .filter(|&v| !removed[v])
        .map(|v| {
            orders
                .list(v)
                .map(|l| l.iter().filter_map(|&u| map[u]).collect::<Vec<_>>())
        })
        .collect();
    let o = StrictOrders::new(&h, lists).expect("restriction of a valid order");
    (h, o, map, kept)
}

/// Whether the instance has a stable matching (no odd cycle in a stable partition).
pub fn has_stable_matching(g: &Graph, orders: &StrictOrders) -> Result<bool, PartitionError> {
    Ok(stable_partition(g, orders)?.odd_cycles.is_empty())
}

/// Smallest `S ⊆ T` (by size, then lexicographically) such that the
/// instance without `S` has a stable matching; `None` if no subset works.
pub fn subset_removable(
    g: &Graph,
    orders: &StrictOrders,
    t: &[AgentId],
    cap: usize,
) -> Result<Option<Vec<AgentId>>, PartitionError> {
    require_unit_orders(g, orders)?;
    let mut t: Vec<AgentId> = t.to_vec();
    t.sort_unstable();
    t.dedup();
    if t.len() > cap {
        return Err(PartitionError::CapExceeded { size: t.len(), cap });
    }
    if let Some(&v) = t.iter().find(|&&v| v >= g.agent_count()) {
        return Err(CoreError::UnknownAgentIndex(v).into());
    }
    for k in 0..=t.len() {
        let mut found = None;
        for_each_combination(t.len(), k, |idx| {
            let mut removed = vec![false; g.agent_count()];
            for &i in idx {
                removed[t[i]] = true;
            }
            let (h, o, _, _) = restrict_orders(g, orders, &removed);
            if has_stable_matching(&h, &o).expect("restriction keeps unit capacities") {
                found = Some(idx.iter().map(|&i| t[i]).collect());
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `true`.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
