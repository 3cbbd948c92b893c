//! Seeded random instances for sweeps and property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bribery::BriberyProblem;
use crate::extension::ExtensionProblem;
use crate::instance::{AgentId, EdgeId, Graph, QMatching, RankBounds, Ranks, StrictOrders, ValueBounds, Values};

use super::CnfFormula;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("a{i}")).collect()
}

/// Each pair is an edge with probability `p`; capacities drawn from `1..=max_q`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64, max_q: u32) -> Graph {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    let caps = (0..n).map(|_| rng.random_range(1..=max_q.max(1))).collect();
    Graph::new(names(n), caps, pairs).expect("random graph is simple")
}

/// Bipartite graph: agents `0..a` on one side, `a..a+b` on the other.
pub fn random_bipartite_graph<R: Rng + ?Sized>(rng: &mut R, a: usize, b: usize, p: f64, max_q: u32) -> Graph {
    let mut pairs = Vec::new();
    for x in 0..a {
        for y in a..a + b {
            if rng.random_bool(p) {
                pairs.push((x, y));
            }
        }
    }
    let caps = (0..a + b).map(|_| rng.random_range(1..=max_q.max(1))).collect();
    Graph::new(names(a + b), caps, pairs).expect("random graph is simple")
}

pub fn random_orders<R: Rng + ?Sized>(rng: &mut R, g: &Graph) -> StrictOrders {
    let lists = g
        .agents()
        .map(|v| {
            let mut l: Vec<AgentId> = g.neighbors(v).collect();
            l.shuffle(rng);
            l
        })
        .collect();
    StrictOrders::complete(g, lists).expect("shuffled neighborhoods")
}

/// Unit-capacity graph with uniformly random strict preferences.
pub fn random_roommates<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> (Graph, StrictOrders) {
    let g = random_graph(rng, n, p, 1);
    let o = random_orders(rng, &g);
    (g, o)
}

/// Greedy q-matching over a shuffled edge list; always maximal.
pub fn random_maximal_matching<R: Rng + ?Sized>(rng: &mut R, g: &Graph) -> QMatching {
    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut load = vec![0u32; g.agent_count()];
    let mut m = Vec::new();
    for e in order {
        let (a, b) = g.endpoints(e);
        if load[a] < g.capacity(a) && load[b] < g.capacity(b) {
            load[a] += 1;
            load[b] += 1;
            m.push(e);
        }
    }
    QMatching::new(m)
}

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Renames agent `v` to `perm[v]` (agents re-sorted by their new index).
pub fn relabel(g: &Graph, orders: &StrictOrders, perm: &[usize]) -> (Graph, StrictOrders) {
    let n = g.agent_count();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let names = (0..n).map(|p| g.name(inv[p]).to_string()).collect();
    let caps = (0..n).map(|p| g.capacity(inv[p])).collect();
    let h = Graph::new(names, caps, g.edges().iter().map(|&(a, b)| (perm[a], perm[b]))).expect("relabeling");
    let lists = (0..n)
        .map(|p| orders.list(inv[p]).map(|l| l.iter().map(|&u| perm[u]).collect()))
        .collect();
    (h.clone(), StrictOrders::new(&h, lists).expect("relabeling"))
}

/// Random independent set: agents in random order, each kept with
/// probability `p` if none of its neighbors was kept. Sorted.
pub fn random_independent_set<R: Rng + ?Sized>(rng: &mut R, g: &Graph, p: f64) -> Vec<AgentId> {
    let mut taken = vec![false; g.agent_count()];
    for v in random_permutation(rng, g.agent_count()) {
        if !g.neighbors(v).any(|u| taken[u]) && rng.random_bool(p) {
            taken[v] = true;
        }
    }
    g.agents().filter(|&v| taken[v]).collect()
}

/// `clauses` clauses of three literals over `vars` variables.
pub fn random_cnf<R: Rng + ?Sized>(rng: &mut R, vars: usize, clauses: usize) -> CnfFormula {
    let cs = (0..clauses)
        .map(|_| {
            (0..3)
                .map(|_| {
                    let x = rng.random_range(1..=vars as i32);
                    if rng.random_bool(0.5) { x } else { -x }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(vars, cs).expect("literals in range")
}

/// Shape of random bribery instances.
#[derive(Clone, Debug)]
pub struct BriberyShape {
    pub agents: usize,
    pub density: f64,
    pub bipartite: bool,
    pub max_capacity: u32,
    /// Values are drawn from `0, 0.5, ..., levels`.
    pub levels: u32,
    pub bounds: bool,
    pub weights: bool,
}

impl Default for BriberyShape {
    fn default() -> Self {
        BriberyShape {
            agents: 8,
            density: 0.4,
            bipartite: true,
            max_capacity: 2,
            levels: 5,
            bounds: false,
            weights: false,
        }
    }
}

pub fn random_bribery_problem<R: Rng + ?Sized>(rng: &mut R, shape: &BriberyShape) -> BriberyProblem {
    let g = if shape.bipartite {
        let a = shape.agents / 2;
        random_bipartite_graph(rng, a, shape.agents - a, shape.density, shape.max_capacity)
    } else {
        random_graph(rng, shape.agents, shape.density, shape.max_capacity)
    };
    let mut values = Values::uniform(&g, 0.0);
    for e in 0..g.edge_count() {
        let (a, b) = g.endpoints(e);
        for v in [a, b] {
            values.set(&g, v, e, rng.random_range(0..=2 * shape.levels) as f64 / 2.0);
        }
    }
    let m = random_maximal_matching(rng, &g);
    let mut prob = BriberyProblem::new(g.clone(), values, m);
    if shape.bounds {
        let mut b = ValueBounds::unbounded(&g);
        for e in 0..g.edge_count() {
            let (x, y) = g.endpoints(e);
            for v in [x, y] {
                if rng.random_bool(0.3) {
                    let lo = rng.random_range(0..=shape.levels) as f64;
                    let hi = if rng.random_bool(0.5) { f64::INFINITY } else { lo + rng.random_range(0..=shape.levels) as f64 };
                    b.set(&g, v, e, lo, hi).expect("ordered bounds");
                }
            }
        }
        prob.bounds = Some(b);
    }
    if shape.weights {
        prob.weights = Some(g.agents().map(|_| rng.random_range(1..=4) as f64 / 2.0).collect());
    }
    prob
}

/// Shape of random rank extension instances.
#[derive(Clone, Debug)]
pub struct ExtensionShape {
    pub agents: usize,
    pub density: f64,
    pub max_capacity: u32,
    /// At most this many positions are left free in total.
    pub max_free: usize,
    pub bounds: bool,
    /// Probability that the hidden full ranks put every agent's matching
    /// edges on top, which makes the unbounded instance a YES instance.
    pub planted: f64,
}

impl Default for ExtensionShape {
    fn default() -> Self {
        ExtensionShape { agents: 7, density: 0.4, max_capacity: 2, max_free: 8, bounds: false, planted: 0.5 }
    }
}

/// Random full ranks, fixed on all matching edges of saturated agents and on
/// a random part of the rest, with at most `max_free` free positions.
pub fn random_extension_problem<R: Rng + ?Sized>(rng: &mut R, shape: &ExtensionShape) -> ExtensionProblem {
    let g = random_graph(rng, shape.agents, shape.density, shape.max_capacity);
    let m = random_maximal_matching(rng, &g);
    let saturated = m.saturated(&g);
    let planted = rng.random_bool(shape.planted);
    let mut full = Ranks::empty(&g);
    for v in g.agents() {
        let mut inc = g.incident(v).to_vec();
        inc.shuffle(rng);
        if planted {
            inc.sort_by_key(|&e| m.contains(e));
        }
        for (k, e) in inc.into_iter().enumerate() {
            full.set(&g, v, e, k as u32 + 1).expect("permutation");
        }
    }
    let mut unfixed: Vec<(AgentId, EdgeId)> = Vec::new();
    for v in g.agents() {
        for &e in g.incident(v) {
            let must = saturated[v] && m.contains(e);
            if !must && rng.random_bool(0.5) {
                unfixed.push((v, e));
            }
        }
    }
    unfixed.shuffle(rng);
    unfixed.truncate(shape.max_free);
    let mut ranks = Ranks::empty(&g);
    for v in g.agents() {
        for &e in g.incident(v) {
            if !unfixed.contains(&(v, e)) {
                ranks.set(&g, v, e, full.get(&g, v, e).unwrap()).expect("from a permutation");
            }
        }
    }
    let mut ep = ExtensionProblem::new(g.clone(), ranks, m);
    if shape.bounds {
        let mut b = RankBounds::trivial(&g);
        for v in g.agents() {
            for &e in g.incident(v) {
                if rng.random_bool(0.35) {
                    b.set(&g, v, e, rng.random_range(1..=g.degree(v) as u32)).expect("in range");
                }
            }
        }
        ep.lower = Some(b);
    }
    ep
}
