use crate::instance::Ranks;
use crate::matching::{hopcroft_karp, BipartiteMatching};

use super::{analyse, free_positions, ExtensionError, ExtensionProblem, Side};

/// Completes the partial ranks so that the matching is stable, or returns
/// `None` when no completion exists. Lower bounds are ignored.
///
/// Every edge that is not yet dominated needs a free position below the
/// worst matching rank at one of its endpoints; these positions ("copies")
/// and the edges form a bipartite graph that must have a matching covering
/// all edges. The remaining positions are filled in ascending order by edge id.
pub fn extend_ranks(ep: &ExtensionProblem) -> Result<Option<Ranks>, ExtensionError> {
    let g = &ep.graph;
    let an = analyse(ep)?;
    if an.necessarily_blocked {
        return Ok(None);
    }
    // Copies: (agent, position) for free positions below the worst matching rank.
    let mut copies: Vec<(usize, u32)> = Vec::new();
    let mut first_copy = vec![0usize; g.agent_count()];
    for v in g.agents() {
        first_copy[v] = copies.len();
        if let Some(w) = an.worst[v] {
            copies.extend(free_positions(g, &ep.ranks, v).into_iter().filter(|&j| j < w).map(|j| (v, j)));
        }
    }
    let adj: Vec<Vec<usize>> = an
        .pending
        .iter()
        .map(|&e| {
            let (a, b) = g.endpoints(e);
            let mut out = Vec::new();
            for (s, v) in [a, b].into_iter().enumerate() {
                if an.side[e][s] == Side::Open {
                    out.extend((first_copy[v]..copies.len()).take_while(|&c| copies[c].0 == v));
                }
            }
            out
        })
        .collect();
    let m = hopcroft_karp(&adj, copies.len(), BipartiteMatching::empty(adj.len(), copies.len()));
    if m.size() < an.pending.len() {
        return Ok(None);
    }
    let mut ranks = ep.ranks.clone();
    for (i, &e) in an.pending.iter().enumerate() {
        let (v, j) = copies[m.left[i].unwrap()];
        ranks.set(g, v, e, j).expect("copy positions are free");
    }
    Ok(Some(ranks.filled(g)))
}
