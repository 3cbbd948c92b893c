use std::path::Path;

use stabrepair::bribery::{
    solve_2approx, solve_bipartite, solve_frozen, BriberyProblem, BriberySolution,
};
use stabrepair::extension::{
    extend_ranks, extend_ranks_lb, red_blue_cover, sr_strat_independent, ExtensionProblem, RedBlueInstance,
};
use stabrepair::oracle::{
    bribery_bruteforce, enumerate_stable_q_matchings, extension_bruteforce, gen_bribery_from_vertex_cover,
    gen_red_blue_from_3sat, min_removable_bruteforce, min_vertex_cover_bruteforce, parse_dimacs,
    sat_bruteforce, VERTEX_COVER_CAP,
};
use stabrepair::parse::{fmt_real, BoundEntry};
use stabrepair::partition::{min_removable_set, restrict_orders, stable_partition, subset_removable};
use stabrepair::{
    blocking_edges, is_maximal, parse_instance, AgentId, Document, EdgeId, Graph, QMatching,
    RankBounds, Ranks, StrictOrders, ValueBounds, Values,
};

use crate::{read, sweep, CliError, Command, Mode, OracleCommand, Report};

pub fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Check { input } => check(&load(input)?),
        Command::Partition { input } => partition(&load(input)?),
        Command::DeleteMin { input } => delete_min(&load(input)?),
        Command::DeleteSubset { input, cap } => delete_subset(&load(input)?, *cap),
        Command::Bribe { input, mode, cap } => bribe(&load(input)?, *mode, *cap),
        Command::Extend { input, lower_bounds } => extend(&load(input)?, *lower_bounds, None),
        Command::StratExtend { input } => strat_extend(&load(input)?),
        Command::Redblue { input, cap } => redblue(&load(input)?, *cap),
        Command::Oracle(o) => match o {
            OracleCommand::StableMatchings { input, cap } => stable_matchings(&load(input)?, *cap),
            OracleCommand::MinRemovable { input, cap } => min_removable(&load(input)?, *cap),
            OracleCommand::Bribe { input, cap } => bribe(&load(input)?, Mode::Brute, *cap),
            OracleCommand::Extend { input, lower_bounds, cap } => {
                extend(&load(input)?, *lower_bounds, Some(*cap))
            }
            OracleCommand::Sat { input, cap } => sat(input, *cap),
            OracleCommand::GenVc { input } => gen_vc(&load(input)?),
            OracleCommand::GenRedblue { input } => gen_redblue(input),
            OracleCommand::Sweep { seed, count } => Ok(sweep::sweep(*seed, *count)),
        },
    }
}

fn load(path: &Path) -> Result<Document, CliError> {
    let text = read(path)?;
    parse_instance(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn need<'a, T>(x: &'a Option<T>, verb: &'static str, section: &'static str) -> Result<&'a T, CliError> {
    x.as_ref().ok_or(CliError::MissingSection { verb, section })
}

fn agent_names(g: &Graph, agents: &[AgentId]) -> Vec<String> {
    agents.iter().map(|&v| g.name(v).to_string()).collect()
}

fn edge_names(g: &Graph, edges: &[EdgeId]) -> Vec<String> {
    edges.iter().map(|&e| g.edge_label(e)).collect()
}

fn joined(items: &[String]) -> String {
    if items.is_empty() {
        "-".into()
    } else {
        items.join(" ")
    }
}

enum Prefs {
    Orders(StrictOrders),
    Values(Values),
}

/// Complete orders, else values, else complete ranks.
fn preferences(doc: &Document) -> Option<(Prefs, &'static str)> {
    let g = &doc.graph;
    if let Some(o) = doc.orders.as_ref().filter(|o| o.is_complete(g)) {
        return Some((Prefs::Orders(o.clone()), "orders"));
    }
    if let Some(p) = &doc.values {
        return Some((Prefs::Values(p.clone()), "values"));
    }
    doc.ranks.as_ref().filter(|r| r.is_complete(g)).map(|r| (Prefs::Orders(r.to_orders(g)), "ranks"))
}

fn blocking(g: &Graph, prefs: &Prefs, m: &QMatching) -> Result<Vec<EdgeId>, CliError> {
    Ok(match prefs {
        Prefs::Orders(o) => blocking_edges(g, o, m)?,
        Prefs::Values(p) => blocking_edges(g, p, m)?,
    })
}

fn check(doc: &Document) -> Result<Report, CliError> {
    let g = &doc.graph;
    let mut r = Report::new("check");
    r.both("agents", g.agent_count().to_string(), g.agent_count());
    r.both("edges", g.edge_count().to_string(), g.edge_count());
    let unit = g.unit_capacity();
    r.both("unit capacity", yes_no(unit), unit);
    let sections: Vec<String> = [
        ("values", doc.values.is_some()),
        ("orders", doc.orders.is_some()),
        ("ranks", doc.ranks.is_some()),
        ("matching", doc.matching.is_some()),
        ("bounds", doc.bounds.is_some()),
        ("weights", doc.weights.is_some()),
        ("subset", doc.subset.is_some()),
        ("colors", doc.colors.is_some()),
    ]
    .iter()
    .filter(|s| s.1)
    .map(|s| s.0.to_string())
    .collect();
    r.both("sections", joined(&sections), &sections);
    let Some(m) = &doc.matching else { return Ok(r) };
    r.both("matching size", m.len().to_string(), m.len());
    let maximal = is_maximal(g, m)?;
    r.both("maximal", yes_no(maximal), maximal);
    match preferences(doc) {
        Some((prefs, source)) => {
            let b = blocking(g, &prefs, m)?;
            let names = edge_names(g, &b);
            r.both("preferences", source, source);
            r.both("blocking edges", joined(&names), &names);
            r.both("stable", yes_no(b.is_empty()), b.is_empty());
            if !b.is_empty() {
                r.no();
            }
        }
        None => {
            r.both("preferences", "incomplete", "incomplete");
        }
    }
    Ok(r)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn partition(doc: &Document) -> Result<Report, CliError> {
    let g = &doc.graph;
    let o = need(&doc.orders, "partition", "orders")?;
    let sp = stable_partition(g, o)?;
    let mut r = Report::new("partition");
    let pi: Vec<String> = g.agents().map(|v| format!("{}>{}", g.name(v), g.name(sp.pi[v]))).collect();
    r.both("successor", joined(&pi), g.agents().map(|v| (g.name(v), g.name(sp.pi[v]))).collect::<Vec<_>>());
    let cycles: Vec<Vec<String>> = sp.cycles.iter().map(|c| agent_names(g, c)).collect();
    for c in &cycles {
        r.line("cycle", c.join(" "));
    }
    r.field("cycles", &cycles);
    let odd: Vec<Vec<String>> = sp.odd_cycles.iter().map(|c| agent_names(g, c)).collect();
    r.both("odd cycles", odd.len().to_string(), &odd);
    for c in &odd {
        r.line("odd cycle", c.join(" "));
    }
    let singletons = agent_names(g, &sp.singletons);
    r.both("singletons", joined(&singletons), &singletons);
    r.both("stable matching exists", yes_no(odd.is_empty()), odd.is_empty());
    Ok(r)
}

/// Instance without `removed`, with the given matching of the original graph.
fn reduced_document(doc: &Document, orders: &StrictOrders, removed: &[AgentId], m: &QMatching) -> Document {
    let g = &doc.graph;
    let mut flags = vec![false; g.agent_count()];
    for &v in removed {
        flags[v] = true;
    }
    let (h, ho, _, kept) = restrict_orders(g, orders, &flags);
    let edges = m.edges().iter().map(|e| kept.binary_search(e).expect("matching avoids removed agents")).collect();
    let mut out = Document::from_graph(h);
    out.orders = Some(ho);
    out.matching = Some(QMatching::new(edges));
    out
}

fn report_deletion(verb: &'static str, doc: &Document, o: &StrictOrders, removed: &[AgentId], m: &QMatching) -> Report {
    let g = &doc.graph;
    let mut r = Report::new(verb);
    let names = agent_names(g, removed);
    r.both("removed", joined(&names), &names);
    r.both("removed count", removed.len().to_string(), removed.len());
    let edges = edge_names(g, m.edges());
    r.both("matching", joined(&edges), &edges);
    r.document(reduced_document(doc, o, removed, m));
    r
}

fn delete_min(doc: &Document) -> Result<Report, CliError> {
    let o = need(&doc.orders, "delete-min", "orders")?;
    let res = min_removable_set(&doc.graph, o)?;
    Ok(report_deletion("delete-min", doc, o, &res.removed, &res.matching))
}

fn delete_subset(doc: &Document, cap: usize) -> Result<Report, CliError> {
    let g = &doc.graph;
    let o = need(&doc.orders, "delete-subset", "orders")?;
    let t = need(&doc.subset, "delete-subset", "subset")?;
    let Some(s) = subset_removable(g, o, t, cap)? else {
        let mut r = Report::new("delete-subset");
        r.both("removed", "none works", Option::<Vec<String>>::None);
        r.no();
        return Ok(r);
    };
    let mut flags = vec![false; g.agent_count()];
    for &v in &s {
        flags[v] = true;
    }
    let (h, ho, _, kept) = restrict_orders(g, o, &flags);
    let inner = min_removable_set(&h, &ho)?;
    debug_assert!(inner.removed.is_empty());
    let m = QMatching::new(inner.matching.edges().iter().map(|&e| kept[e]).collect());
    Ok(report_deletion("delete-subset", doc, o, &s, &m))
}

fn bound_entries_from_values(g: &Graph, b: &ValueBounds) -> Vec<BoundEntry> {
    let mut out = Vec::new();
    for v in g.agents() {
        for &e in g.incident(v) {
            let (lo, hi) = (b.lower(g, v, e), b.upper(g, v, e));
            if lo != 0.0 || hi.is_finite() {
                out.push(BoundEntry {
                    agent: v,
                    edge: e,
                    lower: (lo != 0.0).then_some(lo),
                    upper: hi.is_finite().then_some(hi),
                    line: 0,
                    column: 0,
                });
            }
        }
    }
    out
}

fn bound_entries_from_ranks(g: &Graph, b: &RankBounds) -> Vec<BoundEntry> {
    let mut out = Vec::new();
    for v in g.agents() {
        for &e in g.incident(v) {
            let l = b.get(g, v, e);
            if l > 1 {
                out.push(BoundEntry { agent: v, edge: e, lower: Some(l as f64), upper: None, line: 0, column: 0 });
            }
        }
    }
    out
}

fn bribe(doc: &Document, mode: Mode, cap: usize) -> Result<Report, CliError> {
    let verb = if mode == Mode::Brute { "bribe-brute" } else { "bribe" };
    let g = &doc.graph;
    let values = need(&doc.values, verb, "values")?;
    let m = need(&doc.matching, verb, "matching")?;
    let mut prob = BriberyProblem::new(g.clone(), values.clone(), m.clone());
    prob.bounds = doc.value_bounds();
    prob.weights = doc.weights.clone();
    let sol: BriberySolution = match mode {
        Mode::ExactBipartite => solve_bipartite(&prob)?,
        Mode::Approx => solve_2approx(&prob)?,
        Mode::Frozen => solve_frozen(&prob)?,
        Mode::Brute => bribery_bruteforce(&prob, cap)?,
    };
    let mut r = Report::new(verb);
    let mode_name = match mode {
        Mode::ExactBipartite => "exact-bipartite",
        Mode::Approx => "approx",
        Mode::Frozen => "frozen",
        Mode::Brute => "brute",
    };
    r.both("mode", mode_name, mode_name);
    r.both("cost", fmt_real(sol.cost), sol.cost);
    let changes: Vec<(String, String, f64, f64)> =
        sol.changes.iter().map(|c| (g.name(c.agent).to_string(), g.edge_label(c.edge), c.old, c.new)).collect();
    for (v, e, old, new) in &changes {
        r.line("change", format!("{v} {e} {} {}", fmt_real(*old), fmt_real(*new)));
    }
    r.field("changes", &changes);
    let dominated: Vec<(String, String)> =
        sol.dominated_at.iter().map(|&(e, v)| (g.edge_label(e), g.name(v).to_string())).collect();
    for (e, v) in &dominated {
        r.line("dominated", format!("{e} at {v}"));
    }
    r.field("dominated_at", &dominated);
    if let Some(c) = sol.certificate {
        r.both("lower bound", fmt_real(c.lower_bound), c.lower_bound);
        r.both("ratio", fmt_real(c.ratio), c.ratio);
    }
    let mut out = Document::from_graph(g.clone());
    out.values = Some(sol.values);
    out.matching = Some(m.clone());
    out.bounds = prob.bounds.as_ref().map(|b| bound_entries_from_values(g, b));
    out.weights = prob.weights.clone();
    r.document(out);
    Ok(r)
}

fn extend(doc: &Document, lower_bounds: bool, brute_cap: Option<usize>) -> Result<Report, CliError> {
    let verb = if brute_cap.is_some() { "extend-brute" } else { "extend" };
    let g = &doc.graph;
    let ranks = need(&doc.ranks, verb, "ranks")?;
    let m = need(&doc.matching, verb, "matching")?;
    let mut ep = ExtensionProblem::new(g.clone(), ranks.clone(), m.clone());
    if lower_bounds {
        ep.lower = Some(
            doc.rank_bounds()
                .map_err(|e| CliError::Data(e.to_string()))?
                .unwrap_or_else(|| RankBounds::trivial(g)),
        );
    }
    let full: Option<Ranks> = match brute_cap {
        Some(cap) => extension_bruteforce(&ep, cap)?,
        None if lower_bounds => extend_ranks_lb(&ep)?,
        None => extend_ranks(&ep)?,
    };
    let mut r = Report::new(verb);
    r.both("lower bounds", yes_no(lower_bounds), lower_bounds);
    let Some(full) = full else {
        r.both("result", "no extension", "no extension");
        r.no();
        return Ok(r);
    };
    r.both("result", "extension found", "extension found");
    let mut filled = 0;
    for v in g.agents() {
        for &e in g.incident(v) {
            if ranks.get(g, v, e).is_none() {
                filled += 1;
            }
        }
    }
    r.both("filled positions", filled.to_string(), filled);
    let mut out = Document::from_graph(g.clone());
    out.ranks = Some(full);
    out.matching = Some(m.clone());
    out.bounds = ep.lower.as_ref().map(|b| bound_entries_from_ranks(g, b));
    r.document(out);
    Ok(r)
}

fn strat_extend(doc: &Document) -> Result<Report, CliError> {
    let g = &doc.graph;
    let none = StrictOrders::new(g, vec![None; g.agent_count()])?;
    let orders = doc.orders.as_ref().unwrap_or(&none);
    let fixed: Vec<AgentId> = match &doc.subset {
        Some(s) => s.clone(),
        None => g.agents().filter(|&v| g.degree(v) > 0 && orders.list(v).is_some()).collect(),
    };
    let (full, m) = sr_strat_independent(g, orders, &fixed)?;
    let mut r = Report::new("strat-extend");
    let names = agent_names(g, &fixed);
    r.both("fixed", joined(&names), &names);
    let edges = edge_names(g, m.edges());
    r.both("matching", joined(&edges), &edges);
    let mut out = Document::from_graph(g.clone());
    out.orders = Some(full);
    out.matching = Some(m);
    r.document(out);
    Ok(r)
}

fn redblue(doc: &Document, cap: usize) -> Result<Report, CliError> {
    let g = &doc.graph;
    let colors = need(&doc.colors, "redblue", "colors")?;
    let rb = RedBlueInstance::new(g.clone(), colors.clone())?;
    let mut r = Report::new("redblue");
    r.both("red edges", rb.red().len().to_string(), rb.red().len());
    r.both("blue edges", rb.blue().len().to_string(), rb.blue().len());
    let Some(m) = red_blue_cover(&rb, cap)? else {
        r.both("result", "no cover", "no cover");
        r.no();
        return Ok(r);
    };
    r.both("result", "cover found", "cover found");
    let edges = edge_names(g, &m);
    r.both("matching", joined(&edges), &edges);
    let mut out = Document::from_graph(g.clone());
    out.colors = Some(colors.clone());
    out.matching = Some(QMatching::new(m));
    r.document(out);
    Ok(r)
}

fn stable_matchings(doc: &Document, cap: usize) -> Result<Report, CliError> {
    let g = &doc.graph;
    let (prefs, source) = preferences(doc).ok_or(CliError::MissingSection {
        verb: "oracle stable-matchings",
        section: "orders, values or ranks",
    })?;
    let all = match &prefs {
        Prefs::Orders(o) => enumerate_stable_q_matchings(g, o, cap)?,
        Prefs::Values(p) => enumerate_stable_q_matchings(g, p, cap)?,
    };
    let mut r = Report::new("stable-matchings");
    r.both("preferences", source, source);
    r.both("count", all.len().to_string(), all.len());
    let lists: Vec<Vec<String>> = all.iter().map(|m| edge_names(g, m.edges())).collect();
    for l in &lists {
        r.line("matching", joined(l));
    }
    r.field("matchings", &lists);
    if all.is_empty() {
        r.no();
    }
    Ok(r)
}

fn min_removable(doc: &Document, cap: usize) -> Result<Report, CliError> {
    let g = &doc.graph;
    let o = need(&doc.orders, "oracle min-removable", "orders")?;
    let s = min_removable_bruteforce(g, o, cap)?;
    let mut r = Report::new("min-removable");
    let names = agent_names(g, &s);
    r.both("removed", joined(&names), &names);
    r.both("removed count", s.len().to_string(), s.len());
    Ok(r)
}

fn sat(path: &Path, cap: usize) -> Result<Report, CliError> {
    let f = parse_dimacs(&read(path)?)?;
    let ok = sat_bruteforce(&f, cap)?;
    let mut r = Report::new("sat");
    r.both("variables", f.vars.to_string(), f.vars);
    r.both("clauses", f.clauses.len().to_string(), f.clauses.len());
    r.both("satisfiable", yes_no(ok), ok);
    if !ok {
        r.no();
    }
    Ok(r)
}

fn gen_vc(doc: &Document) -> Result<Report, CliError> {
    let g = &doc.graph;
    let prob = gen_bribery_from_vertex_cover(g);
    let mut r = Report::new("gen-vc");
    if let Ok(cover) = min_vertex_cover_bruteforce(g, VERTEX_COVER_CAP) {
        let names = agent_names(g, &cover);
        r.both("minimum vertex cover", joined(&names), &names);
        r.both("optimum", cover.len().to_string(), cover.len());
    }
    let mut out = Document::from_graph(prob.graph.clone());
    out.values = Some(prob.values);
    out.matching = Some(prob.matching);
    r.document(out);
    Ok(r)
}

fn gen_redblue(path: &Path) -> Result<Report, CliError> {
    let f = parse_dimacs(&read(path)?)?;
    let rb = gen_red_blue_from_3sat(&f);
    let mut r = Report::new("gen-redblue");
    r.both("variables", f.vars.to_string(), f.vars);
    r.both("clauses", f.clauses.len().to_string(), f.clauses.len());
    let mut out = Document::from_graph(rb.graph.clone());
    out.colors = Some(rb.colors.iter().map(|&c| Some(c)).collect());
    r.document(out);
    Ok(r)
}
