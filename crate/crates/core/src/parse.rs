//! Line-oriented instance files: parsing into a [`Document`] and writing one
//! back in canonical form.
//!
//! ```text
//! [agents]      <id> [cap=<int>]
//! [edges]       <id> <id>
//! [values]      <id>: <nbr>=<real> ...
//! [orders]      <id>: <n1> > <n2> > ...
//! [ranks]       <id> <nbr> <int>
//! [matching]    <id> <id>
//! [bounds]      <id> <nbr> l=<real> u=<real>
//! [weights]     <id> <real>
//! [subset]      <id> ...
//! [colors]      <id> <id> r|b
//! ```
//!
//! Sections may appear in any order; each at most once. `#` starts a comment.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::error::CoreError;
use crate::instance::{
    AgentId, EdgeId, Graph, QMatching, RankBounds, Ranks, StrictOrders, ValueBounds, Values,
};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("duplicate section [{0}]")]
    DuplicateSection(String),
    #[error("missing [{0}] section")]
    MissingSection(&'static str),
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("duplicate agent {0}")]
    DuplicateAgent(String),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(String, String),
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("capacity < 1 for agent {0}")]
    CapacityBelowOne(String),
    #[error("{0} {1} is not an edge")]
    NotAnEdge(String, String),
    #[error("rank out of range: {rank} for agent {agent} of degree {degree}")]
    RankOutOfRange { agent: String, rank: i64, degree: usize },
    #[error("duplicate rank {rank} at agent {agent}")]
    DuplicateRank { agent: String, rank: u32 },
    #[error("missing value for {0} {1}")]
    MissingValue(String, String),
    #[error("duplicate entry for {0}")]
    DuplicateEntry(String),
    #[error("order of {0} is not a permutation of its neighbors")]
    NotAPermutation(String),
    #[error("invalid number {0}")]
    InvalidNumber(String),
    #[error("invalid bound: {0}")]
    InvalidBound(String),
    #[error("{0}")]
    Model(CoreError),
}

impl ParseError {
    fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Red,
    Blue,
}

/// One `[bounds]` line, kept as written so that each consumer can interpret
/// it (value interval or rank lower bound).
#[derive(Clone, Debug, PartialEq)]
pub struct BoundEntry {
    pub agent: AgentId,
    pub edge: EdgeId,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub line: usize,
    pub column: usize,
}

/// A parsed instance file.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub graph: Graph,
    pub values: Option<Values>,
    pub orders: Option<StrictOrders>,
    pub ranks: Option<Ranks>,
    pub matching: Option<QMatching>,
    pub bounds: Option<Vec<BoundEntry>>,
    pub weights: Option<Vec<f64>>,
    pub subset: Option<Vec<AgentId>>,
    pub colors: Option<Vec<Option<Color>>>,
}

impl Document {
    /// A document holding only the graph.
    pub fn from_graph(graph: Graph) -> Self {
        Document {
            graph,
            values: None,
            orders: None,
            ranks: None,
            matching: None,
            bounds: None,
            weights: None,
            subset: None,
            colors: None,
        }
    }

    /// Value intervals from `[bounds]`; missing `l` means 0, missing `u` means unbounded.
    pub fn value_bounds(&self) -> Option<ValueBounds> {
        let entries = self.bounds.as_ref()?;
        let g = &self.graph;
        let mut b = ValueBounds::unbounded(g);
        for x in entries {
            let lo = x.lower.unwrap_or(0.0);
            let hi = x.upper.unwrap_or(f64::INFINITY);
            b.set(g, x.agent, x.edge, lo, hi).expect("validated while parsing");
        }
        Some(b)
    }

    /// Rank lower bounds from `[bounds]`; each entry needs an integral `l` in
    /// `[1, deg]` and no `u`.
    pub fn rank_bounds(&self) -> Result<Option<RankBounds>, ParseError> {
        let Some(entries) = &self.bounds else { return Ok(None) };
        let g = &self.graph;
        let mut b = RankBounds::trivial(g);
        for x in entries {
            let err = |kind| ParseError::new(x.line, x.column, kind);
            if x.upper.is_some() {
                return Err(err(ParseErrorKind::InvalidBound(
                    "rank bounds take only l=<int>".into(),
                )));
            }
            let l = x.lower.unwrap_or(1.0);
            if l.fract() != 0.0 {
                return Err(err(ParseErrorKind::InvalidBound(format!("rank bound {l} is not an integer"))));
            }
            let deg = g.degree(x.agent);
            if l < 1.0 || l > deg as f64 {
                return Err(err(ParseErrorKind::RankOutOfRange {
                    agent: g.name(x.agent).to_string(),
                    rank: l as i64,
                    degree: deg,
                }));
            }
            b.set(g, x.agent, x.edge, l as u32).expect("range checked");
        }
        Ok(Some(b))
    }

    /// Agent weights, 1 for every agent when `[weights]` is absent.
    pub fn weights_or_unit(&self) -> Vec<f64> {
        self.weights.clone().unwrap_or_else(|| vec![1.0; self.graph.agent_count()])
    }

    /// Canonical text; parses back to an equal document (up to bound positions).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_document(&mut out, self).expect("writing to a String cannot fail");
        out
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_document(f, self)
    }
}

fn write_document<W: fmt::Write>(out: &mut W, d: &Document) -> fmt::Result {
    let g = &d.graph;
    writeln!(out, "[agents]")?;
    for v in g.agents() {
        match g.capacity(v) {
            1 => writeln!(out, "{}", g.name(v))?,
            q => writeln!(out, "{} cap={q}", g.name(v))?,
        }
    }
    writeln!(out, "[edges]")?;
    for &(a, b) in g.edges() {
        writeln!(out, "{} {}", g.name(a), g.name(b))?;
    }
    if let Some(p) = &d.values {
        writeln!(out, "[values]")?;
        for v in g.agents().filter(|&v| g.degree(v) > 0) {
            write!(out, "{}:", g.name(v))?;
            for &e in g.incident(v) {
                write!(out, " {}={}", g.name(g.other(e, v)), p.get(g, v, e))?;
            }
            writeln!(out)?;
        }
    }
    if let Some(o) = &d.orders {
        writeln!(out, "[orders]")?;
        for v in g.agents() {
            if let Some(list) = o.list(v).filter(|l| !l.is_empty()) {
                let names: Vec<&str> = list.iter().map(|&u| g.name(u)).collect();
                writeln!(out, "{}: {}", g.name(v), names.join(" > "))?;
            }
        }
    }
    if let Some(r) = &d.ranks {
        writeln!(out, "[ranks]")?;
        for v in g.agents() {
            for &e in g.incident(v) {
                if let Some(k) = r.get(g, v, e) {
                    writeln!(out, "{} {} {k}", g.name(v), g.name(g.other(e, v)))?;
                }
            }
        }
    }
    if let Some(m) = &d.matching {
        writeln!(out, "[matching]")?;
        for &e in m.edges() {
            let (a, b) = g.endpoints(e);
            writeln!(out, "{} {}", g.name(a), g.name(b))?;
        }
    }
    if let Some(bounds) = &d.bounds {
        writeln!(out, "[bounds]")?;
        for x in bounds {
            write!(out, "{} {}", g.name(x.agent), g.name(g.other(x.edge, x.agent)))?;
            if let Some(l) = x.lower {
                write!(out, " l={l}")?;
            }
            if let Some(u) = x.upper {
                write!(out, " u={u}")?;
            }
            writeln!(out)?;
        }
    }
    if let Some(w) = &d.weights {
        writeln!(out, "[weights]")?;
        for v in g.agents() {
            writeln!(out, "{} {}", g.name(v), w[v])?;
        }
    }
    if let Some(s) = &d.subset {
        writeln!(out, "[subset]")?;
        let names: Vec<&str> = s.iter().map(|&v| g.name(v)).collect();
        if !names.is_empty() {
            writeln!(out, "{}", names.join(" "))?;
        }
    }
    if let Some(c) = &d.colors {
        writeln!(out, "[colors]")?;
        for (e, color) in c.iter().enumerate() {
            if let Some(color) = color {
                let (a, b) = g.endpoints(e);
                let tag = match color {
                    Color::Red => "r",
                    Color::Blue => "b",
                };
                writeln!(out, "{} {} {tag}", g.name(a), g.name(b))?;
            }
        }
    }
    Ok(())
}

pub fn valid_agent_id(s: &str) -> bool {
    !s.is_empty()
        && !s.chars().any(|c| c.is_whitespace() || matches!(c, '#' | ':' | '=' | '>' | ',' | '[' | ']'))
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    /// Column just past the end of the content, for "missing token" errors.
    end: usize,
}

fn tokenize(number: usize, raw: &str) -> Line<'_> {
    let content = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { text: &content[s..i], line: number, column: column_of(content, s) });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token { text: &content[s..], line: number, column: column_of(content, s) });
    }
    Line { number, tokens, end: content.chars().count() + 1 }
}

fn column_of(s: &str, byte: usize) -> usize {
    s[..byte].chars().count() + 1
}

const SECTIONS: [&str; 10] =
    ["agents", "edges", "values", "orders", "ranks", "matching", "bounds", "weights", "subset", "colors"];

struct Section<'a> {
    header_line: usize,
    lines: Vec<Line<'a>>,
}

struct Ctx<'a> {
    graph: Graph,
    by_name: HashMap<&'a str, AgentId>,
}

impl<'a> Ctx<'a> {
    fn agent(&self, t: Token<'_>) -> Result<AgentId, ParseError> {
        self.by_name.get(t.text).copied().ok_or_else(|| {
            let kind = if valid_agent_id(t.text) {
                ParseErrorKind::UnknownAgent(t.text.to_string())
            } else {
                ParseErrorKind::Syntax(format!("invalid agent id {:?}", t.text))
            };
            ParseError::new(t.line, t.column, kind)
        })
    }

    fn edge(&self, a: Token<'_>, b: Token<'_>) -> Result<(AgentId, AgentId, EdgeId), ParseError> {
        let u = self.agent(a)?;
        let v = self.agent(b)?;
        match self.graph.edge_between(u, v) {
            Some(e) => Ok((u, v, e)),
            None => Err(ParseError::new(
                b.line,
                b.column,
                ParseErrorKind::NotAnEdge(a.text.to_string(), b.text.to_string()),
            )),
        }
    }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(line, column, ParseErrorKind::Syntax(msg.into()))
}

fn expect_len(line: &Line<'_>, n: usize, what: &str) -> Result<(), ParseError> {
    if line.tokens.len() == n {
        return Ok(());
    }
    let column = line.tokens.get(n).map_or(line.end, |t| t.column);
    Err(syntax(line.number, column, format!("expected {what}")))
}

fn parse_real(t: Token<'_>, text: &str, column: usize) -> Result<f64, ParseError> {
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(ParseError::new(t.line, column, ParseErrorKind::InvalidNumber(text.to_string()))),
    }
}

/// `key=value` split of a token; returns the value text and its column.
fn key_value<'t>(t: Token<'t>, key: &str) -> Option<(&'t str, usize)> {
    let rest = t.text.strip_prefix(key)?.strip_prefix('=')?;
    Some((rest, t.column + key.chars().count() + 1))
}

/// Splits `head: rest...` lines used by [values] and [orders].
fn split_head<'t>(line: &Line<'t>) -> Result<(Token<'t>, Vec<Token<'t>>), ParseError> {
    let first = line.tokens[0];
    let mut rest: Vec<Token<'t>> = line.tokens[1..].to_vec();
    let head = if let Some(name) = first.text.strip_suffix(':') {
        Token { text: name, ..first }
    } else if let Some(i) = first.text.find(':') {
        // `a:b=1` with no space after the colon
        let tail = &first.text[i + 1..];
        rest.insert(0, Token { text: tail, line: first.line, column: first.column + i + 1 });
        Token { text: &first.text[..i], ..first }
    } else if rest.first().is_some_and(|t| t.text == ":") {
        rest.remove(0);
        first
    } else if let Some(t) = rest.first_mut().filter(|t| t.text.starts_with(':')) {
        t.text = &t.text[1..];
        t.column += 1;
        first
    } else {
        return Err(syntax(line.number, first.column + first.text.chars().count(), "expected ':'"));
    };
    Ok((head, rest))
}

pub fn parse_instance(text: &str) -> Result<Document, ParseError> {
    let mut sections: HashMap<&'static str, Section<'_>> = HashMap::new();
    let mut current: Option<&'static str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = tokenize(i + 1, raw);
        let Some(first) = line.tokens.first() else { continue };
        if first.text.starts_with('[') {
            let name = first
                .text
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| syntax(line.number, first.column, "malformed section header"))?;
            if line.tokens.len() > 1 {
                return Err(syntax(line.number, line.tokens[1].column, "unexpected text after section header"));
            }
            let Some(&known) = SECTIONS.iter().find(|&&s| s == name) else {
                return Err(ParseError::new(
                    line.number,
                    first.column,
                    ParseErrorKind::UnknownSection(name.to_string()),
                ));
            };
            if sections.contains_key(known) {
                return Err(ParseError::new(
                    line.number,
                    first.column,
                    ParseErrorKind::DuplicateSection(known.to_string()),
                ));
            }
            sections.insert(known, Section { header_line: line.number, lines: Vec::new() });
            current = Some(known);
            continue;
        }
        match current {
            Some(name) => sections.get_mut(name).unwrap().lines.push(line),
            None => return Err(syntax(line.number, first.column, "content before first section header")),
        }
    }

    let agents = sections
        .get("agents")
        .ok_or_else(|| ParseError::new(1, 1, ParseErrorKind::MissingSection("agents")))?;
    let mut names = Vec::new();
    let mut capacity = Vec::new();
    let mut by_name: HashMap<&str, AgentId> = HashMap::new();
    for line in &agents.lines {
        let t = line.tokens[0];
        if !valid_agent_id(t.text) {
            return Err(syntax(t.line, t.column, format!("invalid agent id {:?}", t.text)));
        }
        if line.tokens.len() > 2 {
            return Err(syntax(line.number, line.tokens[2].column, "expected <id> [cap=<int>]"));
        }
        let q = match line.tokens.get(1) {
            None => 1,
            Some(&c) => {
                let (num, column) =
                    key_value(c, "cap").ok_or_else(|| syntax(c.line, c.column, "expected cap=<int>"))?;
                let q: i64 = num.parse().map_err(|_| {
                    ParseError::new(c.line, column, ParseErrorKind::InvalidNumber(num.to_string()))
                })?;
                if q < 1 {
                    return Err(ParseError::new(
                        c.line,
                        column,
                        ParseErrorKind::CapacityBelowOne(t.text.to_string()),
                    ));
                }
                u32::try_from(q).map_err(|_| {
                    ParseError::new(c.line, column, ParseErrorKind::InvalidNumber(num.to_string()))
                })?
            }
        };
        if by_name.insert(t.text, names.len()).is_some() {
            return Err(ParseError::new(t.line, t.column, ParseErrorKind::DuplicateAgent(t.text.to_string())));
        }
        names.push(t.text.to_string());
        capacity.push(q);
    }

    let mut pairs = Vec::new();
    let mut seen = HashMap::new();
    if let Some(edges) = sections.get("edges") {
        for line in &edges.lines {
            expect_len(line, 2, "<id> <id>")?;
            let (a, b) = (line.tokens[0], line.tokens[1]);
            let u = lookup(&by_name, a)?;
            let v = lookup(&by_name, b)?;
            if u == v {
                return Err(ParseError::new(b.line, b.column, ParseErrorKind::SelfLoop(a.text.to_string())));
            }
            if seen.insert((u.min(v), u.max(v)), ()).is_some() {
                return Err(ParseError::new(
                    a.line,
                    a.column,
                    ParseErrorKind::DuplicateEdge(a.text.to_string(), b.text.to_string()),
                ));
            }
            pairs.push((u, v));
        }
    }
    let graph = Graph::new(names, capacity, pairs)
        .map_err(|e| ParseError::new(agents.header_line, 1, ParseErrorKind::Model(e)))?;
    let ctx = Ctx { graph, by_name };
    let mut doc = Document::from_graph(ctx.graph.clone());
    let g = &ctx.graph;

    if let Some(sec) = sections.get("values") {
        let mut p: Vec<[Option<f64>; 2]> = vec![[None; 2]; g.edge_count()];
        let mut line_of = vec![None; g.agent_count()];
        for line in &sec.lines {
            let (head, rest) = split_head(line)?;
            let v = ctx.agent(head)?;
            if line_of[v].replace(line.number).is_some() {
                return Err(ParseError::new(head.line, head.column, ParseErrorKind::DuplicateEntry(head.text.into())));
            }
            for t in rest {
                let Some(eq) = t.text.find('=') else {
                    return Err(syntax(t.line, t.column, "expected <neighbor>=<real>"));
                };
                let nbr = Token { text: &t.text[..eq], ..t };
                let (_, _, e) = ctx.edge(head, nbr)?;
                let x = parse_real(t, &t.text[eq + 1..], t.column + eq + 1)?;
                if x < 0.0 {
                    return Err(ParseError::new(t.line, t.column + eq + 1, ParseErrorKind::InvalidNumber(t.text[eq + 1..].into())));
                }
                let slot = &mut p[e][g.side(e, v)];
                if slot.replace(x).is_some() {
                    return Err(ParseError::new(t.line, t.column, ParseErrorKind::DuplicateEntry(format!("{} {}", head.text, nbr.text))));
                }
            }
        }
        let mut full = Vec::with_capacity(g.edge_count());
        for (e, pair) in p.iter().enumerate() {
            let (a, b) = g.endpoints(e);
            let mut out = [0.0; 2];
            for (side, v, u) in [(0, a, b), (1, b, a)] {
                out[side] = pair[side].ok_or_else(|| {
                    ParseError::new(
                        line_of[v].unwrap_or(sec.header_line),
                        1,
                        ParseErrorKind::MissingValue(g.name(v).into(), g.name(u).into()),
                    )
                })?;
            }
            full.push(out);
        }
        doc.values = Some(Values::from_pairs(g, full).expect("validated above"));
    }

    if let Some(sec) = sections.get("orders") {
        let mut lists: Vec<Option<Vec<AgentId>>> = vec![None; g.agent_count()];
        for line in &sec.lines {
            let (head, rest) = split_head(line)?;
            let v = ctx.agent(head)?;
            if lists[v].is_some() {
                return Err(ParseError::new(head.line, head.column, ParseErrorKind::DuplicateEntry(head.text.into())));
            }
            let mut list = Vec::new();
            let mut expect_name = true;
            for t in &rest {
                // Accept both `a > b` and `a>b`.
                let mut col = t.column;
                for (k, piece) in t.text.split('>').enumerate() {
                    if k > 0 {
                        if expect_name {
                            return Err(syntax(t.line, col - 1, "unexpected '>'"));
                        }
                        expect_name = true;
                    }
                    if !piece.is_empty() {
                        if !expect_name {
                            return Err(syntax(t.line, col, "expected '>'"));
                        }
                        let tok = Token { text: piece, line: t.line, column: col };
                        let (_, u, _) = ctx.edge(head, tok)?;
                        if list.contains(&u) {
                            return Err(ParseError::new(t.line, col, ParseErrorKind::NotAPermutation(head.text.into())));
                        }
                        list.push(u);
                        expect_name = false;
                    }
                    col += piece.chars().count() + 1;
                }
            }
            if expect_name && !list.is_empty() {
                return Err(syntax(line.number, line.end, "trailing '>'"));
            }
            if list.len() != g.degree(v) {
                return Err(ParseError::new(head.line, head.column, ParseErrorKind::NotAPermutation(head.text.into())));
            }
            lists[v] = Some(list);
        }
        doc.orders = Some(StrictOrders::new(g, lists).expect("validated above"));
    }

    if let Some(sec) = sections.get("ranks") {
        let mut r = Ranks::empty(g);
        for line in &sec.lines {
            expect_len(line, 3, "<id> <neighbor> <int>")?;
            let (v, _, e) = ctx.edge(line.tokens[0], line.tokens[1])?;
            let t = line.tokens[2];
            let k: i64 = t.text.parse().map_err(|_| {
                ParseError::new(t.line, t.column, ParseErrorKind::InvalidNumber(t.text.into()))
            })?;
            let deg = g.degree(v);
            if k < 1 || k > deg as i64 {
                return Err(ParseError::new(
                    t.line,
                    t.column,
                    ParseErrorKind::RankOutOfRange { agent: g.name(v).into(), rank: k, degree: deg },
                ));
            }
            if r.get(g, v, e).is_some() {
                return Err(ParseError::new(
                    line.tokens[0].line,
                    line.tokens[0].column,
                    ParseErrorKind::DuplicateEntry(format!("{} {}", line.tokens[0].text, line.tokens[1].text)),
                ));
            }
            r.set(g, v, e, k as u32).map_err(|_| {
                ParseError::new(t.line, t.column, ParseErrorKind::DuplicateRank { agent: g.name(v).into(), rank: k as u32 })
            })?;
        }
        doc.ranks = Some(r);
    }

    if let Some(sec) = sections.get("matching") {
        let mut edges = Vec::new();
        for line in &sec.lines {
            expect_len(line, 2, "<id> <id>")?;
            let (_, _, e) = ctx.edge(line.tokens[0], line.tokens[1])?;
            if edges.contains(&e) {
                let t = line.tokens[0];
                return Err(ParseError::new(t.line, t.column, ParseErrorKind::DuplicateEntry(g.edge_label(e))));
            }
            edges.push(e);
        }
        let m = QMatching::new(edges);
        m.check(g).map_err(|e| ParseError::new(sec.header_line, 1, ParseErrorKind::Model(e)))?;
        doc.matching = Some(m);
    }

    if let Some(sec) = sections.get("bounds") {
        let mut entries: Vec<BoundEntry> = Vec::new();
        for line in &sec.lines {
            if line.tokens.len() < 3 || line.tokens.len() > 4 {
                let column = line.tokens.get(4).map_or(line.end, |t| t.column);
                return Err(syntax(line.number, column, "expected <id> <neighbor> l=<real> [u=<real>]"));
            }
            let (v, _, e) = ctx.edge(line.tokens[0], line.tokens[1])?;
            let mut lower = None;
            let mut upper = None;
            for &t in &line.tokens[2..] {
                if let Some((num, col)) = key_value(t, "l") {
                    if lower.replace(parse_real(t, num, col)?).is_some() {
                        return Err(syntax(t.line, t.column, "repeated l="));
                    }
                } else if let Some((num, col)) = key_value(t, "u") {
                    if upper.replace(parse_real(t, num, col)?).is_some() {
                        return Err(syntax(t.line, t.column, "repeated u="));
                    }
                } else {
                    return Err(syntax(t.line, t.column, "expected l=<real> or u=<real>"));
                }
            }
            let t = line.tokens[2];
            let lo = lower.unwrap_or(0.0);
            if lo < 0.0 || upper.is_some_and(|u| u < lo) {
                return Err(ParseError::new(t.line, t.column, ParseErrorKind::InvalidBound("need 0 <= l <= u".into())));
            }
            if entries.iter().any(|x| x.agent == v && x.edge == e) {
                let h = line.tokens[0];
                return Err(ParseError::new(h.line, h.column, ParseErrorKind::DuplicateEntry(format!("{} {}", h.text, line.tokens[1].text))));
            }
            let h = line.tokens[0];
            entries.push(BoundEntry { agent: v, edge: e, lower, upper, line: h.line, column: h.column });
        }
        entries.sort_by_key(|x| (x.agent, x.edge));
        doc.bounds = Some(entries);
    }

    if let Some(sec) = sections.get("weights") {
        let mut w = vec![None; g.agent_count()];
        for line in &sec.lines {
            expect_len(line, 2, "<id> <real>")?;
            let v = ctx.agent(line.tokens[0])?;
            let t = line.tokens[1];
            let x = parse_real(t, t.text, t.column)?;
            if x <= 0.0 {
                return Err(ParseError::new(t.line, t.column, ParseErrorKind::InvalidNumber(t.text.into())));
            }
            if w[v].replace(x).is_some() {
                let h = line.tokens[0];
                return Err(ParseError::new(h.line, h.column, ParseErrorKind::DuplicateEntry(h.text.into())));
            }
        }
        doc.weights = Some(w.into_iter().map(|x| x.unwrap_or(1.0)).collect());
    }

    if let Some(sec) = sections.get("subset") {
        let mut s = Vec::new();
        for line in &sec.lines {
            for &t in &line.tokens {
                let v = ctx.agent(t)?;
                if s.contains(&v) {
                    return Err(ParseError::new(t.line, t.column, ParseErrorKind::DuplicateEntry(t.text.into())));
                }
                s.push(v);
            }
        }
        s.sort_unstable();
        doc.subset = Some(s);
    }

    if let Some(sec) = sections.get("colors") {
        let mut c = vec![None; g.edge_count()];
        for line in &sec.lines {
            expect_len(line, 3, "<id> <id> r|b")?;
            let (_, _, e) = ctx.edge(line.tokens[0], line.tokens[1])?;
            let t = line.tokens[2];
            let color = match t.text {
                "r" => Color::Red,
                "b" => Color::Blue,
                _ => return Err(syntax(t.line, t.column, "expected r or b")),
            };
            if c[e].replace(color).is_some() {
                let h = line.tokens[0];
                return Err(ParseError::new(h.line, h.column, ParseErrorKind::DuplicateEntry(g.edge_label(e))));
            }
        }
        doc.colors = Some(c);
    }

    Ok(doc)
}

fn lookup(by_name: &HashMap<&str, AgentId>, t: Token<'_>) -> Result<AgentId, ParseError> {
    by_name.get(t.text).copied().ok_or_else(|| {
        let kind = if valid_agent_id(t.text) {
            ParseErrorKind::UnknownAgent(t.text.to_string())
        } else {
            ParseErrorKind::Syntax(format!("invalid agent id {:?}", t.text))
        };
        ParseError::new(t.line, t.column, kind)
    })
}

/// Renders a float for reports the same way the writer does.
pub fn fmt_real(x: f64) -> String {
    let mut s = String::new();
    write!(s, "{x}").unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let doc = parse_instance("[agents]\na\nb\n[edges]\na b\n[values]\na: b=1\nb: a=2\n").unwrap();
        assert_eq!(doc.graph.agent_count(), 2);
        assert_eq!(doc.graph.edge_count(), 1);
        let p = doc.values.unwrap();
        assert_eq!(p.get(&doc.graph, 1, 0), 2.0);
    }

    #[test]
    fn rank_out_of_range_is_reported_with_position() {
        let text = "[agents]\nu\nv\nw\n[edges]\nu v\nv w\n[ranks]\nv u 3\n";
        let err = parse_instance(text).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::RankOutOfRange { rank: 3, .. }));
        assert_eq!((err.line, err.column), (9, 5));
        assert!(err.to_string().contains("rank out of range"));
    }

    #[test]
    fn duplicate_edge_in_either_orientation() {
        let err = parse_instance("[agents]\na\nb\n[edges]\na b\nb a\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::DuplicateEdge(..)));
        assert_eq!(err.line, 6);
        assert!(err.to_string().contains("duplicate edge"));
    }

    #[test]
    fn capacity_below_one() {
        let err = parse_instance("[agents]\na cap=0\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::CapacityBelowOne(_)));
        assert_eq!((err.line, err.column), (2, 7));
    }

    #[test]
    fn unknown_agent_and_section() {
        let err = parse_instance("[agents]\na\n[edges]\na zz\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownAgent("zz".into()));
        assert_eq!((err.line, err.column), (4, 3));
        let err = parse_instance("[agents]\na\n[stuff]\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnknownSection(_)));
    }

    #[test]
    fn missing_value_is_rejected() {
        let err = parse_instance("[agents]\na\nb\n[edges]\na b\n[values]\na: b=1\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingValue("b".into(), "a".into()));
    }

    #[test]
    fn syntax_errors_point_at_the_token() {
        let err = parse_instance("[agents]\na\nb\n[edges]\na b c\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((err.line, err.column), (5, 5));
        let err = parse_instance("[agents]\na\nb\n[edges]\na b\n[values]\na b=1\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn orders_accept_compact_and_spaced_forms() {
        let text = "[agents]\n1\n2\n3\n[edges]\n1 2\n2 3\n1 3\n[orders]\n1: 2 > 3\n2:3>1\n3 : 1> 2\n";
        let doc = parse_instance(text).unwrap();
        let o = doc.orders.unwrap();
        assert_eq!(o.list(1).unwrap(), &[2, 0]);
        assert_eq!(o.list(2).unwrap(), &[0, 1]);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# header\n[agents]  # list\na cap=2 # two\n\nb\n[edges]\na b\n";
        let doc = parse_instance(text).unwrap();
        assert_eq!(doc.graph.capacity(0), 2);
    }

    #[test]
    fn round_trip_all_sections() {
        let text = "\
[agents]
a cap=2
b
c
[edges]
a b
a c
b c
[values]
a: b=1.5 c=0.25
b: a=2 c=0
c: a=1 b=3
[orders]
a: c > b
[ranks]
b a 2
[matching]
a b
[bounds]
a b l=1 u=4
c b l=2
[weights]
a 2
b 1
c 0.5
[subset]
c a
[colors]
a b r
b c b
";
        let doc = parse_instance(text).unwrap();
        let out = doc.to_text();
        let again = parse_instance(&out).unwrap();
        assert_eq!(again.to_text(), out);
        assert_eq!(again.values, doc.values);
        assert_eq!(again.orders, doc.orders);
        assert_eq!(again.ranks, doc.ranks);
        assert_eq!(again.matching, doc.matching);
        assert_eq!(again.subset, Some(vec![0, 2]));
        assert_eq!(again.value_bounds(), doc.value_bounds());
        assert!(doc.rank_bounds().is_err());
    }

    #[test]
    fn rank_bounds_validate_range() {
        let base = "[agents]\nu\nv\nw\n[edges]\nu v\nv w\n[bounds]\n";
        let doc = parse_instance(&format!("{base}v u l=2\n")).unwrap();
        let b = doc.rank_bounds().unwrap().unwrap();
        assert_eq!(b.get(&doc.graph, 1, 0), 2);
        let doc = parse_instance(&format!("{base}v u l=3\n")).unwrap();
        assert!(matches!(doc.rank_bounds().unwrap_err().kind, ParseErrorKind::RankOutOfRange { .. }));
    }

    #[test]
    fn matching_must_respect_capacity() {
        let err = parse_instance("[agents]\na\nb\nc\n[edges]\na b\na c\n[matching]\na b\na c\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Model(CoreError::NotQMatching(_))));
    }
}
