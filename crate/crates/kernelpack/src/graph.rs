//! Instance types shared by every solver, kernelizer and reduction in this
//! crate: d-uniform hypergraphs (optionally d-partite), simple graphs,
//! weighted path-packing graphs and 3-CNF formulas.
//!
//! All values are canonical and immutable after construction: edges are
//! sorted, deduplicated and validated, so structural equality is semantic
//! equality and serialization is reproducible byte for byte.

use std::collections::BTreeMap;

use thiserror::Error;

/// Default refusal threshold for [`Hypergraph::complement`]: the number of
/// complement edges that may be materialized.
pub const DEFAULT_COMPLEMENT_CAP: u64 = 10_000_000;

/// Construction errors for the instance types.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {index} has {got} vertices, expected {expected}")]
    ArityMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("edge {index} repeats vertex {vertex}")]
    RepeatedVertex { index: usize, vertex: usize },
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("edge {index} has two vertices in color class {class}")]
    ColorClash { index: usize, class: usize },
    #[error("color class {class} is empty")]
    EmptyColorClass { class: usize },
    #[error("color {color} of vertex {vertex} out of range (d = {d})")]
    ColorOutOfRange {
        vertex: usize,
        color: usize,
        d: usize,
    },
    #[error("weight {weight} of edge ({u}, {v}) out of range 1..={dmax}")]
    WeightOutOfRange {
        u: usize,
        v: usize,
        weight: u32,
        dmax: u32,
    },
    #[error("complement would have {needed} edges, above the cap of {cap}")]
    ComplementTooLarge { needed: u64, cap: u64 },
    #[error("literal {literal} is invalid for a formula over {nvars} variables")]
    BadLiteral { literal: i64, nvars: usize },
    #[error("pattern graph must be connected for this use")]
    DisconnectedPattern,
    #[error("pattern graph must be nonempty")]
    EmptyPattern,
}

// ============================================================
// d-uniform hypergraphs
// ============================================================

/// A d-uniform hypergraph on vertices `0..n`.
///
/// Edges are stored sorted ascending, each edge itself sorted, duplicates
/// removed. Two hypergraphs compare equal iff they describe the same
/// instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    d: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, validating arity, vertex range and distinctness.
    pub fn new(d: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        if d == 0 {
            return Err(GraphError::ZeroArity);
        }
        let mut canon = Vec::with_capacity(edges.len());
        for (index, mut e) in edges.into_iter().enumerate() {
            if e.len() != d {
                return Err(GraphError::ArityMismatch {
                    index,
                    expected: d,
                    got: e.len(),
                });
            }
            e.sort_unstable();
            for w in e.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::RepeatedVertex {
                        index,
                        vertex: w[0],
                    });
                }
            }
            if let Some(&v) = e.last() {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            canon.push(e);
        }
        canon.sort();
        canon.dedup();
        Ok(Self { d, n, edges: canon })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of (distinct) edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn has_edge(&self, edge: &[usize]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.binary_search(&e).is_ok()
    }

    /// Complement hypergraph with the default materialization cap.
    pub fn complement(&self) -> Result<Hypergraph, GraphError> {
        self.complement_with_cap(DEFAULT_COMPLEMENT_CAP)
    }

    /// All size-d subsets of the vertex set that are *not* edges.
    ///
    /// Refuses (without allocating) when the complement would exceed `cap`
    /// edges.
    pub fn complement_with_cap(&self, cap: u64) -> Result<Hypergraph, GraphError> {
        let total = binomial(self.n as u64, self.d as u64);
        let needed = total.saturating_sub(self.edges.len() as u64);
        if needed > cap {
            return Err(GraphError::ComplementTooLarge { needed, cap });
        }
        let mut edges = Vec::with_capacity(needed as usize);
        let mut subset: Vec<usize> = (0..self.d).collect();
        if self.d <= self.n {
            loop {
                if self.edges.binary_search(&subset).is_err() {
                    edges.push(subset.clone());
                }
                if !next_subset(&mut subset, self.n) {
                    break;
                }
            }
        }
        Hypergraph::new(self.d, self.n, edges)
    }

    /// Drops isolated vertices, renumbering the rest; `map[new] = old`.
    pub fn drop_isolated(&self) -> (Hypergraph, Vec<usize>) {
        let mut used = vec![false; self.n];
        for e in &self.edges {
            for &v in e {
                used[v] = true;
            }
        }
        let map: Vec<usize> = (0..self.n).filter(|&v| used[v]).collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| new_id[v]).collect())
            .collect();
        let g = Hypergraph::new(self.d, map.len(), edges).expect("renumbering preserves validity");
        (g, map)
    }

    /// Subhypergraph induced by `keep` (edges lying fully inside it),
    /// renumbered to `0..keep.len()`; `map[new] = old`.
    pub fn induced(&self, keep: &[usize]) -> (Hypergraph, Vec<usize>) {
        let mut map: Vec<usize> = keep.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| new_id[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| new_id[v]).collect())
            .collect();
        let g = Hypergraph::new(self.d, map.len(), edges).expect("induced edges stay valid");
        (g, map)
    }

    /// View of this hypergraph as a simple graph; requires `d == 2`.
    pub fn to_simple(&self) -> Option<SimpleGraph> {
        if self.d != 2 {
            return None;
        }
        let edges = self.edges.iter().map(|e| (e[0], e[1])).collect();
        Some(SimpleGraph::new(self.n, edges).expect("2-uniform edges are graph edges"))
    }
}

/// C(n, k) saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Advances `subset` to the next size-k subset of `0..n` in lexicographic
/// order; returns false after the last one.
fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

// ============================================================
// d-partite hypergraphs
// ============================================================

/// A d-uniform hypergraph together with a coloring of the vertices by the
/// classes `0..d`, such that no edge has two vertices of the same class.
///
/// Every class must be inhabited when the graph has vertices at all, so a
/// perfect matching question is well posed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedHypergraph {
    graph: Hypergraph,
    color: Vec<usize>,
}

impl PartitionedHypergraph {
    pub fn new(graph: Hypergraph, color: Vec<usize>) -> Result<Self, GraphError> {
        let d = graph.d();
        let n = graph.n();
        assert_eq!(color.len(), n, "one color per vertex");
        for (vertex, &c) in color.iter().enumerate() {
            if c >= d {
                return Err(GraphError::ColorOutOfRange {
                    vertex,
                    color: c,
                    d,
                });
            }
        }
        if n > 0 {
            let mut seen = vec![false; d];
            for &c in &color {
                seen[c] = true;
            }
            if let Some(class) = seen.iter().position(|s| !s) {
                return Err(GraphError::EmptyColorClass { class });
            }
        }
        for (index, e) in graph.edges().iter().enumerate() {
            let mut used = vec![false; d];
            for &v in e {
                if used[color[v]] {
                    return Err(GraphError::ColorClash {
                        index,
                        class: color[v],
                    });
                }
                used[color[v]] = true;
            }
        }
        Ok(Self { graph, color })
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn color(&self, v: usize) -> usize {
        self.color[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.color
    }

    /// Vertices of each color class, ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.graph.d()];
        for (v, &c) in self.color.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

// ============================================================
// Simple graphs
// ============================================================

/// An undirected simple graph on vertices `0..n` with canonical edge list
/// (each pair `(u, v)` with `u < v`, pairs sorted, duplicates removed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut canon = Vec::with_capacity(edges.len());
        for (index, (a, b)) in edges.into_iter().enumerate() {
            if a == b {
                return Err(GraphError::RepeatedVertex { index, vertex: a });
            }
            let (u, v) = (a.min(b), a.max(b));
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            canon.push((u, v));
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self { n, edges: canon })
    }

    /// The empty graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    /// Neighbor lists, ascending per vertex.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Induced subgraph on `keep` (sorted, deduplicated); `map[new] = old`.
    pub fn induced(&self, keep: &[usize]) -> (SimpleGraph, Vec<usize>) {
        let mut map: Vec<usize> = keep.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| new_id[*u] != usize::MAX && new_id[*v] != usize::MAX)
            .map(|&(u, v)| (new_id[u], new_id[v]))
            .collect();
        let g = SimpleGraph::new(map.len(), edges).expect("induced edges stay valid");
        (g, map)
    }

    /// Complement graph on the same vertices.
    pub fn complement(&self) -> SimpleGraph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        SimpleGraph::new(self.n, edges).expect("complement edges are valid")
    }

    /// View as a 2-uniform hypergraph.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let edges = self.edges.iter().map(|&(u, v)| vec![u, v]).collect();
        Hypergraph::new(2, self.n, edges).expect("graph edges are 2-uniform")
    }

    /// Connected components as sorted vertex lists, ordered by smallest
    /// member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            let mut comp = Vec::new();
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

// ============================================================
// Weighted path-packing graphs
// ============================================================

/// Edge key of a [`WeightedPathGraph`]: a regular edge `{u, v}` is stored as
/// `(u, v)` with `u < v`, a dangling edge at `v` as `(v, v)`.
pub type WEdge = (usize, usize);

/// A graph with positive integer edge weights in `1..=dmax`, where a
/// self-loop `(v, v)` denotes a *dangling* edge at `v`.
///
/// Dangling edges may only appear as the first or last edge of a path; a
/// degenerate one-vertex path uses its dangling edge once. The weight of a
/// path is the sum of the weights of its edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPathGraph {
    n: usize,
    dmax: u32,
    edges: BTreeMap<WEdge, u32>,
}

impl WeightedPathGraph {
    pub fn new(n: usize, dmax: u32, edges: Vec<(usize, usize, u32)>) -> Result<Self, GraphError> {
        let mut map = BTreeMap::new();
        for (a, b, w) in edges {
            let (u, v) = (a.min(b), a.max(b));
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if w < 1 || w > dmax {
                return Err(GraphError::WeightOutOfRange {
                    u,
                    v,
                    weight: w,
                    dmax,
                });
            }
            // Last write wins on duplicates so canonical text stays stable.
            map.insert((u, v), w);
        }
        Ok(Self { n, dmax, edges: map })
    }

    /// Lifts a plain graph to unit weights (no dangling edges).
    pub fn from_simple(g: &SimpleGraph, dmax: u32) -> Self {
        let edges = g.edges().iter().map(|&(u, v)| ((u, v), 1)).collect();
        Self {
            n: g.n(),
            dmax: dmax.max(1),
            edges,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn dmax(&self) -> u32 {
        self.dmax
    }

    pub fn weights(&self) -> &BTreeMap<WEdge, u32> {
        &self.edges
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<u32> {
        self.edges.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn dangling_weight(&self, v: usize) -> Option<u32> {
        self.edges.get(&(v, v)).copied()
    }

    /// Sets the weight of the edge `{a, b}` (dangling when `a == b`), adding
    /// the edge if absent.
    pub fn set_weight(&mut self, a: usize, b: usize, w: u32) -> Result<(), GraphError> {
        let (u, v) = (a.min(b), a.max(b));
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        if w < 1 || w > self.dmax {
            return Err(GraphError::WeightOutOfRange {
                u,
                v,
                weight: w,
                dmax: self.dmax,
            });
        }
        self.edges.insert((u, v), w);
        Ok(())
    }

    /// Neighbor lists over regular edges only, ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(u, v), _) in &self.edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        adj
    }

    /// Induced subgraph on `keep`; `map[new] = old`. Dangling edges survive
    /// when their vertex does.
    pub fn induced(&self, keep: &[usize]) -> (WeightedPathGraph, Vec<usize>) {
        let mut map: Vec<usize> = keep.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(&(u, v), _)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
            .map(|(&(u, v), &w)| (new_id[u], new_id[v], w))
            .collect();
        let g = WeightedPathGraph::new(map.len(), self.dmax, edges)
            .expect("induced edges stay valid");
        (g, map)
    }
}

// ============================================================
// Pattern graphs
// ============================================================

/// A small pattern graph `H` for packing problems, with derived facts cached
/// at construction: exact chromatic number, connectivity, and the anchor
/// vertex used when simulating hyperedges (the lowest-id vertex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPattern {
    graph: SimpleGraph,
    chromatic_number: usize,
    connected: bool,
}

impl HPattern {
    pub fn new(graph: SimpleGraph) -> Result<Self, GraphError> {
        if graph.n() == 0 {
            return Err(GraphError::EmptyPattern);
        }
        let chromatic_number = chromatic_number(&graph);
        let connected = graph.components().len() == 1;
        Ok(Self {
            graph,
            chromatic_number,
            connected,
        })
    }

    /// The complete graph K_p.
    pub fn clique(p: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..p {
            for v in u + 1..p {
                edges.push((u, v));
            }
        }
        Self::new(SimpleGraph::new(p, edges).unwrap()).unwrap()
    }

    /// The path with `edges` edges (so `edges + 1` vertices).
    pub fn path(edges: usize) -> Self {
        let list = (0..edges).map(|i| (i, i + 1)).collect();
        Self::new(SimpleGraph::new(edges + 1, list).unwrap()).unwrap()
    }

    /// The star K_{1,leaves}: center 0, leaves 1..=leaves.
    pub fn star(leaves: usize) -> Self {
        let list = (1..=leaves).map(|i| (0, i)).collect();
        Self::new(SimpleGraph::new(leaves + 1, list).unwrap()).unwrap()
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    pub fn chromatic_number(&self) -> usize {
        self.chromatic_number
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Anchor vertex exposed as a terminal by the hyperedge gadget.
    pub fn anchor(&self) -> usize {
        0
    }
}

/// Exact chromatic number by backtracking; intended for pattern-sized graphs.
fn chromatic_number(g: &SimpleGraph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    if g.m() == 0 {
        return 1;
    }
    let adj = g.adjacency();
    fn colorable(adj: &[Vec<usize>], colors: &mut [usize], v: usize, c: usize) -> bool {
        if v == adj.len() {
            return true;
        }
        for color in 0..c {
            if adj[v].iter().all(|&w| colors[w] != color) {
                colors[v] = color;
                if colorable(adj, colors, v + 1, c) {
                    return true;
                }
                colors[v] = usize::MAX;
            }
        }
        false
    }
    for c in 2..=g.n() {
        let mut colors = vec![usize::MAX; g.n()];
        if colorable(&adj, &mut colors, 0, c) {
            return c;
        }
    }
    g.n()
}

// ============================================================
// 3-CNF formulas
// ============================================================

/// A 3-CNF formula; literals are nonzero integers whose sign is the
/// polarity, variables are `1..=nvars`. Clauses may repeat literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    nvars: usize,
    clauses: Vec<[i64; 3]>,
}

impl CnfFormula {
    pub fn new(nvars: usize, clauses: Vec<[i64; 3]>) -> Result<Self, GraphError> {
        for clause in &clauses {
            for &literal in clause {
                if literal == 0 || literal.unsigned_abs() as usize > nvars {
                    return Err(GraphError::BadLiteral { literal, nvars });
                }
            }
        }
        Ok(Self { nvars, clauses })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn clauses(&self) -> &[[i64; 3]] {
        &self.clauses
    }

    /// True when `assignment` (indexed by variable - 1) satisfies every
    /// clause.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypergraph_canonicalizes_edges() {
        let h = Hypergraph::new(3, 5, vec![vec![2, 0, 1], vec![0, 1, 2], vec![4, 3, 2]]).unwrap();
        assert_eq!(h.m(), 2);
        assert_eq!(h.edges()[0], vec![0, 1, 2]);
        assert_eq!(h.edges()[1], vec![2, 3, 4]);
    }

    #[test]
    fn hypergraph_rejects_bad_edges() {
        assert_eq!(
            Hypergraph::new(2, 3, vec![vec![0, 0]]),
            Err(GraphError::RepeatedVertex { index: 0, vertex: 0 })
        );
        assert_eq!(
            Hypergraph::new(2, 3, vec![vec![0, 3]]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(
            Hypergraph::new(3, 4, vec![vec![0, 1]]),
            Err(GraphError::ArityMismatch {
                index: 0,
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn complement_of_empty_triangle_set() {
        // K_4 as a 2-uniform hypergraph has all 6 pairs; its complement is
        // empty and the complement of that is K_4 again.
        let k4: Vec<Vec<usize>> = (0..4)
            .flat_map(|u| (u + 1..4).map(move |v| vec![u, v]))
            .collect();
        let h = Hypergraph::new(2, 4, k4).unwrap();
        let c = h.complement().unwrap();
        assert_eq!(c.m(), 0);
        assert_eq!(c.complement().unwrap(), h);
    }

    #[test]
    fn complement_refuses_above_cap() {
        let h = Hypergraph::new(3, 30, vec![]).unwrap();
        // C(30, 3) = 4060 > 100.
        match h.complement_with_cap(100) {
            Err(GraphError::ComplementTooLarge { needed, cap }) => {
                assert_eq!(needed, 4060);
                assert_eq!(cap, 100);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn partition_enforces_class_rules() {
        let h = Hypergraph::new(2, 4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let ok = PartitionedHypergraph::new(h.clone(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(ok.classes(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(
            PartitionedHypergraph::new(h.clone(), vec![0, 0, 0, 1]),
            Err(GraphError::ColorClash { index: 0, class: 0 })
        );
        assert_eq!(
            PartitionedHypergraph::new(h, vec![0, 1, 0, 2]),
            Err(GraphError::ColorOutOfRange {
                vertex: 3,
                color: 2,
                d: 2
            })
        );
    }

    #[test]
    fn simple_graph_roundtrips_through_hypergraph() {
        let g = SimpleGraph::new(4, vec![(3, 1), (0, 1), (1, 3)]).unwrap();
        assert_eq!(g.m(), 2);
        assert!(g.has_edge(1, 3));
        assert_eq!(g.to_hypergraph().to_simple().unwrap(), g);
    }

    #[test]
    fn induced_subgraph_renumbers() {
        let g = SimpleGraph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (sub, map) = g.induced(&[1, 2, 4]);
        assert_eq!(map, vec![1, 2, 4]);
        assert_eq!(sub.edges(), &[(0, 1)]);
    }

    #[test]
    fn weighted_graph_handles_dangling_edges() {
        let g = WeightedPathGraph::new(3, 4, vec![(0, 1, 2), (2, 2, 3)]).unwrap();
        assert_eq!(g.weight(1, 0), Some(2));
        assert_eq!(g.dangling_weight(2), Some(3));
        assert_eq!(g.dangling_weight(0), None);
        assert_eq!(g.adjacency()[2], Vec::<usize>::new());
    }

    #[test]
    fn weighted_graph_rejects_out_of_range_weight() {
        assert!(matches!(
            WeightedPathGraph::new(2, 3, vec![(0, 1, 0)]),
            Err(GraphError::WeightOutOfRange { .. })
        ));
        assert!(matches!(
            WeightedPathGraph::new(2, 3, vec![(0, 1, 4)]),
            Err(GraphError::WeightOutOfRange { .. })
        ));
    }

    #[test]
    fn pattern_constructors_and_derived_facts() {
        let k3 = HPattern::clique(3);
        assert_eq!(k3.chromatic_number(), 3);
        assert!(k3.is_connected());

        let p3 = HPattern::path(3);
        assert_eq!(p3.vertex_count(), 4);
        assert_eq!(p3.chromatic_number(), 2);

        let star = HPattern::star(3);
        assert_eq!(star.vertex_count(), 4);
        assert_eq!(star.chromatic_number(), 2);
        assert_eq!(star.anchor(), 0);

        let two_parts = HPattern::new(SimpleGraph::new(4, vec![(0, 1), (2, 3)]).unwrap()).unwrap();
        assert!(!two_parts.is_connected());
    }

    #[test]
    fn cnf_eval_and_validation() {
        let f = CnfFormula::new(2, vec![[1, 1, 2], [-1, -1, -2]]).unwrap();
        assert!(f.eval(&[true, false]));
        assert!(!f.eval(&[true, true]));
        assert!(matches!(
            CnfFormula::new(1, vec![[1, 0, 1]]),
            Err(GraphError::BadLiteral { .. })
        ));
        assert!(matches!(
            CnfFormula::new(1, vec![[1, 2, 1]]),
            Err(GraphError::BadLiteral { .. })
        ));
    }
}
