use crate::instance::{AgentId, EdgeId, Graph, QMatching, StrictOrders};
use crate::partition::restrict_orders;
use crate::stability::{is_stable, Preferences};

use super::{check_cap, OracleError};

/// Visits every q-matching (edge ids ascending) until `f` returns `true`.
fn for_each_q_matching(g: &Graph, f: &mut impl FnMut(&[EdgeId]) -> bool) -> bool {
    fn go(
        g: &Graph,
        e: EdgeId,
        load: &mut [u32],
        chosen: &mut Vec<EdgeId>,
        f: &mut impl FnMut(&[EdgeId]) -> bool,
    ) -> bool {
        if e == g.edge_count() {
            return f(chosen);
        }
        let (a, b) = g.endpoints(e);
        if load[a] < g.capacity(a) && load[b] < g.capacity(b) {
            load[a] += 1;
            load[b] += 1;
            chosen.push(e);
            let stop = go(g, e + 1, load, chosen, f);
            chosen.pop();
            load[a] -= 1;
            load[b] -= 1;
            if stop {
                return true;
            }
        }
        go(g, e + 1, load, chosen, f)
    }
    go(g, 0, &mut vec![0; g.agent_count()], &mut Vec::new(), f)
}

/// All stable q-matchings, sorted lexicographically by their edge id lists.
pub fn enumerate_stable_q_matchings<P: Preferences>(
    g: &Graph,
    prefs: &P,
    cap: usize,
) -> Result<Vec<QMatching>, OracleError> {
    check_cap("agents", g.agent_count(), cap)?;
    let mut out: Vec<Vec<EdgeId>> = Vec::new();
    let mut err = None;
    for_each_q_matching(g, &mut |m| {
        match is_stable(g, prefs, &QMatching::new(m.to_vec())) {
            Ok(s) if s.is_stable() => out.push(m.to_vec()),
            Ok(_) => {}
            Err(e) => {
                err = Some(e);
                return true;
            }
        }
        false
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    out.sort();
    Ok(out.into_iter().map(QMatching::new).collect())
}

/// Some stable q-matching, if one exists.
pub fn find_stable_q_matching<P: Preferences>(g: &Graph, prefs: &P) -> Result<Option<QMatching>, OracleError> {
    let mut found = None;
    let mut err = None;
    for_each_q_matching(g, &mut |m| {
        let m = QMatching::new(m.to_vec());
        match is_stable(g, prefs, &m) {
            Ok(s) if s.is_stable() => {
                found = Some(m);
                true
            }
            Ok(_) => false,
            Err(e) => {
                err = Some(e);
                true
            }
        }
    });
    match err {
        Some(e) => Err(e.into()),
        None => Ok(found),
    }
}

/// Smallest agent set (by size, then in mask order) whose removal leaves an
/// instance with a stable matching, found by trying every subset.
pub fn min_removable_bruteforce(
    g: &Graph,
    orders: &StrictOrders,
    cap: usize,
) -> Result<Vec<AgentId>, OracleError> {
    let n = g.agent_count();
    check_cap("agents", n, cap)?;
    orders.require_complete(g)?;
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let removed: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        let (h, o, _, _) = restrict_orders(g, orders, &removed);
        if find_stable_q_matching(&h, &o)?.is_some() {
            return Ok((0..n).filter(|&v| removed[v]).collect());
        }
    }
    unreachable!("removing every agent leaves a stable empty matching")
}
