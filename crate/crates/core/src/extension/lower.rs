//! Rank completion with lower bounds, in four phases:
//!
//! 1. cover every undominated edge by a free position below the worst
//!    matching rank of one endpoint, respecting the bounds;
//! 2. split each edge into one vertex per endpoint ("sides") and carry the
//!    phase 1 matching over to them;
//! 3. augment until every low position is taken, which never uncovers a
//!    position or a side;
//! 4. place the sides that can only go high, then the rest.

use crate::instance::{AgentId, EdgeId, Ranks};
use crate::matching::{hopcroft_karp, BipartiteMatching};

use super::{analyse, free_positions, ExtensionError, ExtensionProblem, Side};

/// What happened during a run, for inspection in tests.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LowerBoundTrace {
    /// Phase that answered NO (1, 3 or 4), or 0 for a failed pre-check.
    pub failed_phase: Option<u8>,
    /// Number of phase 3 augmentations.
    pub augmentations: usize,
    /// Covered low positions after each phase 3 augmentation.
    pub covered_sizes: Vec<usize>,
    /// Every augmentation kept all previously covered positions covered.
    pub monotone: bool,
}

pub fn extend_ranks_lb(ep: &ExtensionProblem) -> Result<Option<Ranks>, ExtensionError> {
    extend_ranks_lb_traced(ep).map(|(r, _)| r)
}

/// A free position of one agent.
#[derive(Clone, Copy, Debug)]
struct Copy {
    agent: AgentId,
    pos: u32,
}

/// An unfixed (agent, edge) pair.
#[derive(Clone, Copy, Debug)]
struct SideVertex {
    agent: AgentId,
    edge: EdgeId,
    lower: u32,
}

pub fn extend_ranks_lb_traced(
    ep: &ExtensionProblem,
) -> Result<(Option<Ranks>, LowerBoundTrace), ExtensionError> {
    let g = &ep.graph;
    let an = analyse(ep)?;
    let mut trace = LowerBoundTrace { monotone: true, ..Default::default() };
    let no = |mut trace: LowerBoundTrace, phase: u8| {
        trace.failed_phase = Some(phase);
        Ok((None, trace))
    };
    let fixed_below_bound = g.agents().any(|v| {
        g.incident(v).iter().any(|&e| ep.ranks.get(g, v, e).is_some_and(|r| r < ep.lower_bound(v, e)))
    });
    if an.necessarily_blocked || fixed_below_bound {
        return no(trace, 0);
    }

    let is_low = |c: &Copy| an.worst[c.agent].is_some_and(|w| c.pos < w);
    let mut low: Vec<Copy> = Vec::new();
    let mut high: Vec<Copy> = Vec::new();
    for v in g.agents() {
        for pos in free_positions(g, &ep.ranks, v) {
            let c = Copy { agent: v, pos };
            if is_low(&c) {
                low.push(c);
            } else {
                high.push(c);
            }
        }
    }
    let low_of = |v: AgentId| low.iter().enumerate().filter(move |(_, c)| c.agent == v).map(|(i, _)| i);

    // Phase 1.
    let adj1: Vec<Vec<usize>> = an
        .pending
        .iter()
        .map(|&e| {
            let (a, b) = g.endpoints(e);
            let mut out = Vec::new();
            for (s, v) in [a, b].into_iter().enumerate() {
                if an.side[e][s] == Side::Open {
                    let l = ep.lower_bound(v, e);
                    out.extend(low_of(v).filter(|&i| low[i].pos >= l));
                }
            }
            out
        })
        .collect();
    let n1 = hopcroft_karp(&adj1, low.len(), BipartiteMatching::empty(adj1.len(), low.len()));
    if n1.size() < an.pending.len() {
        return no(trace, 1);
    }

    // Phase 2.
    let mut sides: Vec<SideVertex> = Vec::new();
    for v in g.agents() {
        for &e in g.incident(v) {
            if ep.ranks.get(g, v, e).is_none() {
                sides.push(SideVertex { agent: v, edge: e, lower: ep.lower_bound(v, e) });
            }
        }
    }
    let side_index = |v: AgentId, e: EdgeId| sides.iter().position(|s| s.agent == v && s.edge == e).unwrap();
    // Left: low copies; right: sides.
    let adj3: Vec<Vec<usize>> = low
        .iter()
        .map(|c| {
            (0..sides.len())
                .filter(|&k| sides[k].agent == c.agent && c.pos >= sides[k].lower)
                .collect()
        })
        .collect();
    let mut n3 = BipartiteMatching::empty(low.len(), sides.len());
    for (i, &e) in an.pending.iter().enumerate() {
        let c = n1.left[i].unwrap();
        n3.link(c, side_index(low[c].agent, e));
    }

    // Phase 3.
    for c in 0..low.len() {
        if n3.left[c].is_some() {
            continue;
        }
        let before: Vec<bool> = n3.left.iter().map(Option::is_some).collect();
        let before_sides: Vec<bool> = n3.right.iter().map(Option::is_some).collect();
        if !n3.augment_from(&adj3, c) {
            return no(trace, 3);
        }
        trace.augmentations += 1;
        let kept = before.iter().zip(&n3.left).all(|(was, now)| !was || now.is_some())
            && before_sides.iter().zip(&n3.right).all(|(was, now)| !was || now.is_some());
        assert!(kept, "an augmentation uncovered a position");
        trace.monotone &= kept;
        trace.covered_sizes.push(n3.size());
    }
    // Dominating sides stay on low positions.
    debug_assert!(an.pending.iter().all(|&e| {
        let (a, b) = g.endpoints(e);
        [a, b].iter().any(|&v| {
            ep.ranks.get(g, v, e).is_none() && n3.right[side_index(v, e)].is_some()
        })
    }));

    // Phase 4: sides that cannot sit below the worst matching rank first,
    // then the rest, which at a saturated agent fit any high position.
    let rest: Vec<usize> = (0..sides.len()).filter(|&k| n3.right[k].is_none()).collect();
    let forced_high = |k: usize| {
        let s = sides[k];
        an.worst[s.agent].is_none_or(|w| s.lower >= w)
    };
    let (forced, flexible): (Vec<usize>, Vec<usize>) = rest.iter().partition(|&&k| forced_high(k));
    let adj4: Vec<Vec<usize>> = forced
        .iter()
        .map(|&k| {
            (0..high.len())
                .filter(|&h| high[h].agent == sides[k].agent && high[h].pos >= sides[k].lower)
                .collect()
        })
        .collect();
    let n4 = hopcroft_karp(&adj4, high.len(), BipartiteMatching::empty(adj4.len(), high.len()));
    if n4.size() < forced.len() {
        return no(trace, 4);
    }

    let mut ranks = ep.ranks.clone();
    for (c, k) in n3.left.iter().enumerate() {
        let s = sides[k.expect("all low positions covered")];
        ranks.set(g, s.agent, s.edge, low[c].pos).expect("free position");
    }
    let mut used = vec![false; high.len()];
    for (i, &k) in forced.iter().enumerate() {
        let h = n4.left[i].unwrap();
        used[h] = true;
        ranks.set(g, sides[k].agent, sides[k].edge, high[h].pos).expect("free position");
    }
    for &k in &flexible {
        let s = sides[k];
        let h = (0..high.len())
            .find(|&h| !used[h] && high[h].agent == s.agent)
            .expect("positions and sides balance per agent");
        debug_assert!(high[h].pos >= s.lower);
        used[h] = true;
        ranks.set(g, s.agent, s.edge, high[h].pos).expect("free position");
    }
    Ok((Some(ranks), trace))
}
