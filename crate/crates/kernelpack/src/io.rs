//! Plain-text instance formats.
//!
//! Every format is line oriented, UTF-8 with `\n` line ends; blank lines and
//! lines starting with `#` are ignored. The first meaningful line is a
//! header naming the format:
//!
//! ```text
//! hg <d> <n> <m>     m lines "e v1 ... vd"; optional "part <class> <v>"
//! g <n> <m>          m lines "e u v"
//! wg <n> <m> <dmax>  m lines "e u v w"; u = v marks a dangling edge
//! cnf <nvars> <m>    m lines with three nonzero literals
//! ```
//!
//! Vertices and color classes are 0-based; CNF variables are 1-based with
//! sign as polarity, matching the usual convention. Serialization is
//! canonical, so `parse(serialize(x)) == x` for every valid instance.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{
    CnfFormula, GraphError, Hypergraph, PartitionedHypergraph, SimpleGraph, WeightedPathGraph,
};

/// A parsed instance of any supported format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Hypergraph(Hypergraph),
    Partitioned(PartitionedHypergraph),
    Graph(SimpleGraph),
    WeightedPaths(WeightedPathGraph),
    Cnf(CnfFormula),
}

/// Parse failure, pointing at the offending 1-based line.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

struct Lines<'a> {
    // (1-based line number, whitespace-split tokens)
    rows: Vec<(usize, Vec<&'a str>)>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let rows = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| {
                let t = l.trim_start();
                !t.is_empty() && !t.starts_with('#')
            })
            .map(|(i, l)| (i, l.split_whitespace().collect()))
            .collect();
        Self { rows, next: 0 }
    }

    fn take(&mut self) -> Option<&(usize, Vec<&'a str>)> {
        let row = self.rows.get(self.next);
        if row.is_some() {
            self.next += 1;
        }
        row
    }

    fn last_line(&self) -> usize {
        self.rows.last().map_or(1, |(i, _)| *i)
    }
}

fn parse_count(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse::<usize>()
        .map_err(|_| ParseError::new(line, format!("{what} must be a nonnegative integer, got `{token}`")))
}

fn lift<T>(line: usize, r: Result<T, GraphError>) -> Result<T, ParseError> {
    r.map_err(|e| ParseError::new(line, e.to_string()))
}

/// Parses an instance, detecting the format from the header line.
pub fn parse(text: &str) -> Result<Instance, ParseError> {
    let mut lines = Lines::new(text);
    let (header_line, header) = match lines.take() {
        Some(row) => (row.0, row.1.clone()),
        None => return Err(ParseError::new(1, "empty input: missing header line")),
    };
    match header[0] {
        "hg" => parse_hypergraph(header_line, &header, lines),
        "g" => parse_graph(header_line, &header, lines),
        "wg" => parse_weighted(header_line, &header, lines),
        "cnf" => parse_cnf(header_line, &header, lines),
        other => Err(ParseError::new(
            header_line,
            format!("unknown header `{other}` (expected hg, g, wg or cnf)"),
        )),
    }
}

fn parse_hypergraph(
    header_line: usize,
    header: &[&str],
    mut lines: Lines,
) -> Result<Instance, ParseError> {
    if header.len() != 4 {
        return Err(ParseError::new(header_line, "hg header needs `hg <d> <n> <m>`"));
    }
    let d = parse_count(header_line, header[1], "d")?;
    let n = parse_count(header_line, header[2], "n")?;
    let m = parse_count(header_line, header[3], "m")?;
    let mut edges = Vec::with_capacity(m);
    let mut parts: Vec<(usize, usize, usize)> = Vec::new(); // (line, class, vertex)
    let mut edge_lines = Vec::with_capacity(m);
    while let Some((line, tokens)) = lines.take().map(|(l, t)| (*l, t.clone())) {
        match tokens[0] {
            "e" => {
                let mut edge = Vec::with_capacity(tokens.len() - 1);
                for t in &tokens[1..] {
                    edge.push(parse_count(line, t, "vertex")?);
                }
                edges.push(edge);
                edge_lines.push(line);
            }
            "part" => {
                if tokens.len() != 3 {
                    return Err(ParseError::new(line, "part line needs `part <class> <v>`"));
                }
                let class = parse_count(line, tokens[1], "class")?;
                let v = parse_count(line, tokens[2], "vertex")?;
                parts.push((line, class, v));
            }
            other => {
                return Err(ParseError::new(line, format!("unexpected row tag `{other}`")));
            }
        }
    }
    if edges.len() != m {
        return Err(ParseError::new(
            lines.last_line(),
            format!("header promises {m} edges, found {}", edges.len()),
        ));
    }
    let graph = match Hypergraph::new(d, n, edges) {
        Ok(g) => g,
        Err(e) => {
            // Attribute arity/vertex errors to the edge row that caused them.
            let line = match e {
                GraphError::ArityMismatch { index, .. }
                | GraphError::RepeatedVertex { index, .. } => edge_lines[index],
                _ => header_line,
            };
            return Err(ParseError::new(line, e.to_string()));
        }
    };
    if parts.is_empty() {
        return Ok(Instance::Hypergraph(graph));
    }
    let mut color = vec![usize::MAX; n];
    for (line, class, v) in parts {
        if v >= n {
            return Err(ParseError::new(line, format!("vertex {v} out of range (n = {n})")));
        }
        color[v] = class;
    }
    if let Some(v) = color.iter().position(|&c| c == usize::MAX) {
        return Err(ParseError::new(
            lines.last_line(),
            format!("vertex {v} has no part line"),
        ));
    }
    let part = lift(header_line, PartitionedHypergraph::new(graph, color))?;
    Ok(Instance::Partitioned(part))
}

fn parse_graph(header_line: usize, header: &[&str], mut lines: Lines) -> Result<Instance, ParseError> {
    if header.len() != 3 {
        return Err(ParseError::new(header_line, "g header needs `g <n> <m>`"));
    }
    let n = parse_count(header_line, header[1], "n")?;
    let m = parse_count(header_line, header[2], "m")?;
    let mut edges = Vec::with_capacity(m);
    while let Some((line, tokens)) = lines.take().map(|(l, t)| (*l, t.clone())) {
        if tokens[0] != "e" || tokens.len() != 3 {
            return Err(ParseError::new(line, "expected `e <u> <v>`"));
        }
        let u = parse_count(line, tokens[1], "vertex")?;
        let v = parse_count(line, tokens[2], "vertex")?;
        if u == v {
            return Err(ParseError::new(line, format!("self-loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(ParseError::new(
                line,
                format!("vertex {} out of range (n = {n})", u.max(v)),
            ));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(ParseError::new(
            lines.last_line(),
            format!("header promises {m} edges, found {}", edges.len()),
        ));
    }
    let g = lift(header_line, SimpleGraph::new(n, edges))?;
    Ok(Instance::Graph(g))
}

fn parse_weighted(
    header_line: usize,
    header: &[&str],
    mut lines: Lines,
) -> Result<Instance, ParseError> {
    if header.len() != 4 {
        return Err(ParseError::new(header_line, "wg header needs `wg <n> <m> <dmax>`"));
    }
    let n = parse_count(header_line, header[1], "n")?;
    let m = parse_count(header_line, header[2], "m")?;
    let dmax = parse_count(header_line, header[3], "dmax")? as u32;
    let mut edges = Vec::with_capacity(m);
    while let Some((line, tokens)) = lines.take().map(|(l, t)| (*l, t.clone())) {
        if tokens[0] != "e" || tokens.len() != 4 {
            return Err(ParseError::new(line, "expected `e <u> <v> <w>`"));
        }
        let u = parse_count(line, tokens[1], "vertex")?;
        let v = parse_count(line, tokens[2], "vertex")?;
        let w = parse_count(line, tokens[3], "weight")? as u32;
        if u >= n || v >= n {
            return Err(ParseError::new(
                line,
                format!("vertex {} out of range (n = {n})", u.max(v)),
            ));
        }
        if w < 1 || w > dmax {
            return Err(ParseError::new(
                line,
                format!("weight {w} out of range 1..={dmax}"),
            ));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(ParseError::new(
            lines.last_line(),
            format!("header promises {m} edges, found {}", edges.len()),
        ));
    }
    let g = lift(header_line, WeightedPathGraph::new(n, dmax, edges))?;
    Ok(Instance::WeightedPaths(g))
}

fn parse_cnf(header_line: usize, header: &[&str], mut lines: Lines) -> Result<Instance, ParseError> {
    if header.len() != 3 {
        return Err(ParseError::new(header_line, "cnf header needs `cnf <nvars> <m>`"));
    }
    let nvars = parse_count(header_line, header[1], "nvars")?;
    let m = parse_count(header_line, header[2], "m")?;
    let mut clauses = Vec::with_capacity(m);
    while let Some((line, tokens)) = lines.take().map(|(l, t)| (*l, t.clone())) {
        if tokens.len() != 3 {
            return Err(ParseError::new(line, "expected three literals per clause line"));
        }
        let mut clause = [0i64; 3];
        for (slot, t) in clause.iter_mut().zip(&tokens) {
            let lit: i64 = t
                .parse()
                .map_err(|_| ParseError::new(line, format!("literal must be an integer, got `{t}`")))?;
            if lit == 0 {
                return Err(ParseError::new(line, "literal 0 is not allowed"));
            }
            if lit.unsigned_abs() as usize > nvars {
                return Err(ParseError::new(
                    line,
                    format!("literal {lit} exceeds nvars = {nvars}"),
                ));
            }
            *slot = lit;
        }
        clauses.push(clause);
    }
    if clauses.len() != m {
        return Err(ParseError::new(
            lines.last_line(),
            format!("header promises {m} clauses, found {}", clauses.len()),
        ));
    }
    let f = lift(header_line, CnfFormula::new(nvars, clauses))?;
    Ok(Instance::Cnf(f))
}

/// Canonical text for any instance.
pub fn serialize(instance: &Instance) -> String {
    match instance {
        Instance::Hypergraph(h) => serialize_hypergraph(h),
        Instance::Partitioned(p) => serialize_partitioned(p),
        Instance::Graph(g) => serialize_graph(g),
        Instance::WeightedPaths(w) => serialize_weighted(w),
        Instance::Cnf(f) => serialize_cnf(f),
    }
}

pub fn serialize_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "hg {} {} {}", h.d(), h.n(), h.m()).unwrap();
    for e in h.edges() {
        out.push('e');
        for v in e {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn serialize_partitioned(p: &PartitionedHypergraph) -> String {
    let mut out = serialize_hypergraph(p.graph());
    for (v, &c) in p.colors().iter().enumerate() {
        writeln!(out, "part {c} {v}").unwrap();
    }
    out
}

pub fn serialize_graph(g: &SimpleGraph) -> String {
    let mut out = String::new();
    writeln!(out, "g {} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

pub fn serialize_weighted(g: &WeightedPathGraph) -> String {
    let mut out = String::new();
    writeln!(out, "wg {} {} {}", g.n(), g.m(), g.dmax()).unwrap();
    for (&(u, v), &w) in g.weights() {
        writeln!(out, "e {u} {v} {w}").unwrap();
    }
    out
}

pub fn serialize_cnf(f: &CnfFormula) -> String {
    let mut out = String::new();
    writeln!(out, "cnf {} {}", f.nvars(), f.clauses().len()).unwrap();
    for c in f.clauses() {
        writeln!(out, "{} {} {}", c[0], c[1], c[2]).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_hypergraph_with_comments() {
        let text = "# a triangle pair\nhg 3 5 2\ne 0 1 2\n\ne 2 3 4\n";
        match parse(text).unwrap() {
            Instance::Hypergraph(h) => {
                assert_eq!((h.d(), h.n(), h.m()), (3, 5, 2));
            }
            other => panic!("wrong variant: {other:?}"),
        }
    }

    #[test]
    fn parses_partitioned_hypergraph() {
        let text = "hg 2 2 1\ne 0 1\npart 0 0\npart 1 1\n";
        match parse(text).unwrap() {
            Instance::Partitioned(p) => assert_eq!(p.colors(), &[0, 1]),
            other => panic!("wrong variant: {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("hg 3 5 2\ne 0 1 2\ne 2 3\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("expected 3"), "{}", e.message);

        let e = parse("g 3 1\ne 0 5\n").unwrap_err();
        assert_eq!(e.line, 2);

        let e = parse("wg 3 1 2\ne 0 1 9\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("out of range"));

        let e = parse("cnf 2 1\n1 0 2\n").unwrap_err();
        assert_eq!(e.line, 2);

        let e = parse("# only comments\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn edge_count_mismatch_is_reported() {
        let e = parse("g 3 2\ne 0 1\n").unwrap_err();
        assert!(e.message.contains("promises 2"));
    }

    #[test]
    fn roundtrip_is_identity_on_canonical_forms() {
        let texts = [
            "hg 3 5 2\ne 0 1 2\ne 2 3 4\n",
            "g 4 2\ne 0 1\ne 2 3\n",
            "wg 3 3 4\ne 0 0 2\ne 0 1 1\ne 1 2 4\n",
            "cnf 3 2\n1 -2 3\n-1 -1 2\n",
        ];
        for text in texts {
            let inst = parse(text).unwrap();
            let printed = serialize(&inst);
            assert_eq!(parse(&printed).unwrap(), inst);
            assert_eq!(printed, text);
        }
    }

    #[test]
    fn dangling_edge_roundtrip() {
        let g = WeightedPathGraph::new(2, 3, vec![(1, 1, 3), (0, 1, 2)]).unwrap();
        let text = serialize_weighted(&g);
        assert_eq!(text, "wg 2 2 3\ne 0 1 2\ne 1 1 3\n");
        match parse(&text).unwrap() {
            Instance::WeightedPaths(back) => assert_eq!(back, g),
            other => panic!("wrong variant: {other:?}"),
        }
    }
}
