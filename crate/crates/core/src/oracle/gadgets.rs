use crate::bribery::BriberyProblem;
use crate::extension::RedBlueInstance;
use crate::instance::{AgentId, Graph, QMatching, Values};
use crate::parse::Color;

use super::{check_cap, CnfFormula, OracleError};

/// Pendant gadget for vertex cover: every vertex `v` becomes `v'` (keeping
/// the edges of `g`) matched to a new pendant `v''`. Matching values are 0,
/// all others 1, so the cheapest repair costs the minimum vertex cover size.
/// Agents `v'` come first, in the order of `g`, then the pendants.
pub fn gen_bribery_from_vertex_cover(g: &Graph) -> BriberyProblem {
    let n = g.agent_count();
    let mut names: Vec<String> = g.names().iter().map(|s| format!("{s}'")).collect();
    names.extend(g.names().iter().map(|s| format!("{s}''")));
    let pairs = g.edges().iter().copied().chain((0..n).map(|v| (v, n + v)));
    let h = Graph::new(names, vec![1; 2 * n], pairs).expect("gadget graph is simple");
    let mut p = Values::uniform(&h, 1.0);
    let m: Vec<_> = (0..n).map(|v| h.edge_between(v, n + v).unwrap()).collect();
    for &e in &m {
        let (a, b) = h.endpoints(e);
        p.set(&h, a, e, 0.0);
        p.set(&h, b, e, 0.0);
    }
    BriberyProblem::new(h, p, QMatching::new(m))
}

/// A minimum vertex cover, the first in mask order among the smallest.
pub fn min_vertex_cover_bruteforce(g: &Graph, cap: usize) -> Result<Vec<AgentId>, OracleError> {
    let n = g.agent_count();
    check_cap("vertices", n, cap)?;
    let mut best: Option<u64> = None;
    for mask in 0..1u64 << n {
        if best.is_some_and(|b| mask.count_ones() >= b.count_ones()) {
            continue;
        }
        if g.edges().iter().all(|&(a, b)| (mask >> a | mask >> b) & 1 == 1) {
            best = Some(mask);
        }
    }
    let b = best.unwrap_or(0);
    Ok((0..n).filter(|&v| b >> v & 1 == 1).collect())
}

/// Red-blue gadget of a 3-CNF formula (clauses padded to three literals).
///
/// Clause `j` adds `c'j` and `c''j` joined by red edges to one vertex per
/// literal occurrence, `y^i_j` for `x_i` and `z^i_j` for its negation
/// (repeated occurrences get a `/k` suffix). Variable `i` adds `y_i`, `z_i`
/// and a selector `s_i` with red edges `y_i s_i`, `z_i s_i`, and blue edges
/// from `y_i` (resp. `z_i`) to its positive (resp. negative) occurrences.
pub fn gen_red_blue_from_3sat(f: &CnfFormula) -> RedBlueInstance {
    let mut names: Vec<String> = Vec::new();
    let mut edges: Vec<(AgentId, AgentId, Color)> = Vec::new();
    let add = |names: &mut Vec<String>, s: String| {
        names.push(s);
        names.len() - 1
    };
    let mut occurrences: Vec<(i32, AgentId)> = Vec::new();
    for (j, clause) in f.padded().iter().enumerate() {
        let j = j + 1;
        let c1 = add(&mut names, format!("c'{j}"));
        let c2 = add(&mut names, format!("c''{j}"));
        for (k, &l) in clause.iter().enumerate() {
            let base = format!("{}^{}_{j}", if l > 0 { 'y' } else { 'z' }, l.unsigned_abs());
            let copies = clause[..k].iter().filter(|&&x| x == l).count();
            let name = if copies == 0 { base } else { format!("{base}/{}", copies + 1) };
            let x = add(&mut names, name);
            edges.push((c1, x, Color::Red));
            edges.push((c2, x, Color::Red));
            occurrences.push((l, x));
        }
    }
    for i in 1..=f.vars {
        let y = add(&mut names, format!("y_{i}"));
        let z = add(&mut names, format!("z_{i}"));
        let s = add(&mut names, format!("s_{i}"));
        edges.push((y, s, Color::Red));
        edges.push((z, s, Color::Red));
        for &(l, x) in &occurrences {
            if l.unsigned_abs() as usize == i {
                edges.push((if l > 0 { y } else { z }, x, Color::Blue));
            }
        }
    }
    let n = names.len();
    let g = Graph::new(names, vec![1; n], edges.iter().map(|&(a, b, _)| (a, b))).expect("gadget graph is simple");
    let mut colors = vec![None; g.edge_count()];
    for &(a, b, c) in &edges {
        colors[g.edge_between(a, b).unwrap()] = Some(c);
    }
    RedBlueInstance::new(g, colors).expect("gadget is bipartite and colored")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{red_blue_cover, DEFAULT_RED_CAP};
    use crate::oracle::sat_bruteforce;

    #[test]
    fn vertex_cover_gadget_shape() {
        let g = Graph::with_unit_capacity(2, [(0, 1)]).unwrap();
        let prob = gen_bribery_from_vertex_cover(&g);
        assert_eq!(prob.graph.agent_count(), 4);
        assert_eq!(prob.graph.names(), &["0'", "1'", "0''", "1''"]);
        assert_eq!(prob.matching.len(), 2);
    }

    #[test]
    fn vertex_cover_sizes() {
        let tri = Graph::with_unit_capacity(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(min_vertex_cover_bruteforce(&tri, 24).unwrap(), vec![0, 1]);
        let empty = Graph::with_unit_capacity(3, []).unwrap();
        assert!(min_vertex_cover_bruteforce(&empty, 24).unwrap().is_empty());
    }

    #[test]
    fn one_clause_gadget_counts() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        let rb = gen_red_blue_from_3sat(&f);
        // 5 clause vertices, 6 literal-side variable vertices, 3 selectors.
        assert_eq!(rb.graph.agent_count(), 14);
        assert_eq!(rb.red().len(), 6 + 6);
        assert_eq!(rb.blue().len(), 3);
        assert!(rb.graph.index_of("y^2_1").is_some());
        assert!(rb.graph.index_of("s_3").is_some());
    }

    #[test]
    fn repeated_literals_get_suffixes() {
        let f = CnfFormula::new(1, vec![vec![1]]).unwrap();
        let rb = gen_red_blue_from_3sat(&f);
        for name in ["y^1_1", "y^1_1/2", "y^1_1/3"] {
            assert!(rb.graph.index_of(name).is_some(), "{name}");
        }
    }

    #[test]
    fn cover_exists_exactly_for_satisfiable_formulas() {
        let cases = [
            CnfFormula::new(1, vec![vec![1, -1]]).unwrap(),
            CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap(),
            CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]]).unwrap(),
            CnfFormula::new(3, vec![vec![1, 2, 3], vec![-1, -2, -3]]).unwrap(),
        ];
        for f in &cases {
            let rb = gen_red_blue_from_3sat(f);
            let cover = red_blue_cover(&rb, DEFAULT_RED_CAP).unwrap();
            assert_eq!(cover.is_some(), sat_bruteforce(f, 20).unwrap(), "{f}");
        }
    }
}
