use crate::extension::{ExtensionError, ExtensionProblem};
use crate::instance::{AgentId, EdgeId, Ranks};
use crate::stability::{is_maximal, is_stable};

use super::{check_cap, OracleError};

/// All orderings of `items`, in lexicographic order of index sequences.
fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Tries every completion of the fixed ranks that respects the lower bounds
/// and returns the first one under which the matching is stable.
pub fn extension_bruteforce(ep: &ExtensionProblem, cap: usize) -> Result<Option<Ranks>, OracleError> {
    let g = &ep.graph;
    ep.matching.check(g)?;
    if !is_maximal(g, &ep.matching)? {
        return Err(ExtensionError::NotMaximal.into());
    }
    // Per agent with free positions: its unfixed edges and every admissible
    // placement of them.
    let mut slots: Vec<(AgentId, Vec<EdgeId>, Vec<Vec<u32>>)> = Vec::new();
    let mut free_total = 0;
    for v in g.agents() {
        let unfixed: Vec<EdgeId> = g.incident(v).iter().copied().filter(|&e| ep.ranks.get(g, v, e).is_none()).collect();
        if unfixed.is_empty() {
            continue;
        }
        let used: Vec<u32> = g.incident(v).iter().filter_map(|&e| ep.ranks.get(g, v, e)).collect();
        let free: Vec<u32> = (1..=g.degree(v) as u32).filter(|k| !used.contains(k)).collect();
        free_total += free.len();
        check_cap("free positions", free_total, cap)?;
        let placements: Vec<Vec<u32>> = permutations(&free)
            .into_iter()
            .filter(|p| unfixed.iter().zip(p).all(|(&e, &r)| r >= ep.lower_bound(v, e)))
            .collect();
        slots.push((v, unfixed, placements));
    }
    for v in g.agents() {
        for &e in g.incident(v) {
            if ep.ranks.get(g, v, e).is_some_and(|r| r < ep.lower_bound(v, e)) {
                return Ok(None);
            }
        }
    }
    let mut pick = vec![0usize; slots.len()];
    if slots.iter().any(|s| s.2.is_empty()) {
        return Ok(None);
    }
    loop {
        let mut full = ep.ranks.clone();
        for (k, (v, unfixed, placements)) in slots.iter().enumerate() {
            for (&e, &r) in unfixed.iter().zip(&placements[pick[k]]) {
                full.set(g, *v, e, r)?;
            }
        }
        if is_stable(g, &full.to_orders(g), &ep.matching)?.is_stable() {
            return Ok(Some(full));
        }
        // Next combination, last agent fastest.
        let mut k = slots.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < slots[k].2.len() {
                break;
            }
            pick[k] = 0;
        }
    }
}
