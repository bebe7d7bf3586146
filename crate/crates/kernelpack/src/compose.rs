//! Builders that merge many instances into one whose answer is their OR,
//! plus the single-instance reductions that carry answers between problem
//! languages so the mergers can be chained.
//!
//! Every merger follows the same recipe: normalize the inputs to a common
//! shape, lay them out in labeled groups, and attach gadgets that force any
//! global solution to commit to a single group. Each returns a
//! [`CompositionReport`] recording exactly how large the merge came out
//! relative to the number and size of the inputs.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::gadget::{build_hyperedge_gadget, build_selector_gadget, naive_packing_structure};
use crate::graph::{
    binomial, CnfFormula, GraphError, HPattern, Hypergraph, PartitionedHypergraph, SimpleGraph,
};
use crate::io;

/// Size accounting for one composition: how many inputs went in, how large
/// the biggest one was, and how many vertices came out.
#[derive(Debug, Clone, Serialize)]
pub struct CompositionReport {
    /// Number of real input instances.
    pub t: usize,
    /// Bit length of the largest input under its text encoding.
    pub s: usize,
    /// Arity of the construction: d for matchings and formulas, p for
    /// factor patterns.
    pub arity: usize,
    /// Blocks per class: the smallest m with `m^arity >= t` where inputs
    /// are arranged on a grid, or t itself for the naive factor layout.
    pub blocks_per_class: usize,
    /// Trivially-NO instances appended to fill the grid.
    pub padded_instances: usize,
    /// Exact vertex count of the composed instance.
    pub output_vertices: usize,
}

fn make_report(
    t: usize,
    s: usize,
    arity: usize,
    blocks_per_class: usize,
    padded_instances: usize,
    output_vertices: usize,
) -> CompositionReport {
    assert!(
        power(blocks_per_class, arity) >= t as u128,
        "the block grid must cover every instance"
    );
    CompositionReport {
        t,
        s,
        arity,
        blocks_per_class,
        padded_instances,
        output_vertices,
    }
}

/// Rejections for malformed or out-of-range composition inputs.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("nothing to compose")]
    Empty,
    #[error("instance {index} has arity {got}, expected {expected}")]
    MixedArity {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("arity {got} unsupported here, needs at least {min}")]
    AritySmall { got: usize, min: usize },
    #[error("instance {index} has {got} blocks per side, expected {expected}")]
    MixedBlocks {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("instance {index} is not a block-partitioned bipartite instance")]
    MalformedBlocks { index: usize },
    #[error("instance {index}: vertex count does not split into {parts} equal parts")]
    UnevenParts { index: usize, parts: usize },
    #[error("instance {index} has an edge inside part {part}")]
    EdgeInsidePart { index: usize, part: usize },
    #[error("the pattern must be connected")]
    DisconnectedPattern,
    #[error("only complete patterns compose; this one has {vertices} vertices but chromatic number {chi}")]
    IncompletePattern { chi: usize, vertices: usize },
    #[error("formulas must range over at least 3 variables, got {got}")]
    TooFewVariables { got: usize },
    #[error("clique size {k} out of range 1..={n}")]
    CliqueSizeOutOfRange { k: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `m^e` without overflow surprises.
fn power(m: usize, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(m as u128))
}

/// Smallest `m >= 1` with `m^arity >= t`.
fn blocks_for(t: usize, arity: usize) -> usize {
    let mut m = 1;
    while power(m, arity) < t as u128 {
        m += 1;
    }
    m
}

/// Little-endian digits of `index` in base `m`, one per axis.
fn digits(index: usize, m: usize, axes: usize) -> Vec<usize> {
    let mut rest = index;
    (0..axes)
        .map(|_| {
            let d = rest % m;
            rest /= m;
            d
        })
        .collect()
}

// ============================================================
// Perfect matchings in partite hypergraphs
// ============================================================

/// An instance as (class, slot) edges with every class padded to `c` slots.
///
/// Evenly sized instances are topped up with full-span dummy edges, which
/// can always enter or leave a perfect matching together with the fresh
/// slots they cover. Unevenly sized instances have no perfect matching to
/// begin with, and the idle slots they leave behind keep it that way.
fn normalize_pdm(inst: &PartitionedHypergraph, d: usize, c: usize) -> Vec<Vec<(usize, usize)>> {
    let classes = inst.classes();
    let mut slot = vec![0usize; inst.graph().n()];
    for class in &classes {
        for (l, &v) in class.iter().enumerate() {
            slot[v] = l;
        }
    }
    let mut edges: Vec<Vec<(usize, usize)>> = inst
        .graph()
        .edges()
        .iter()
        .map(|e| e.iter().map(|&v| (inst.color(v), slot[v])).collect())
        .collect();
    if classes.iter().all(|cl| cl.len() == classes[0].len()) {
        for extra in classes[0].len()..c {
            edges.push((0..d).map(|a| (a, extra)).collect());
        }
    }
    edges
}

/// Merges d-partite perfect-matching instances into one that has a perfect
/// matching iff some input does.
///
/// The inputs are spread over a d-dimensional grid of blocks, instance i
/// landing at the grid point spelled by the base-m digits of i. One
/// selector per class then forces any perfect matching to leave exactly one
/// block per class uncovered — and those freed blocks spell out a single
/// grid point, so the matching restricted to instance edges is a perfect
/// matching of that one input.
pub fn compose_or_perfect_dm(
    instances: &[PartitionedHypergraph],
    d: usize,
) -> Result<(PartitionedHypergraph, CompositionReport), ComposeError> {
    if instances.is_empty() {
        return Err(ComposeError::Empty);
    }
    if d < 3 {
        return Err(ComposeError::AritySmall { got: d, min: 3 });
    }
    for (index, inst) in instances.iter().enumerate() {
        if inst.graph().d() != d {
            return Err(ComposeError::MixedArity {
                index,
                expected: d,
                got: inst.graph().d(),
            });
        }
    }

    let s = instances
        .iter()
        .map(|i| io::serialize_partitioned(i).len() * 8)
        .max()
        .unwrap_or(0);
    let t = instances.len();
    let m = blocks_for(t, d);
    // every embedded class gets c slots; selector blocks need at least 2
    let c = instances
        .iter()
        .flat_map(|i| i.classes().into_iter().map(|cl| cl.len()))
        .max()
        .unwrap_or(0)
        .max(2);

    let group = |a: usize, b: usize| (a * m + b) * c;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        let b = digits(i, m, d);
        for e in normalize_pdm(inst, d, c) {
            edges.push(e.into_iter().map(|(a, l)| group(a, b[a]) + l).collect());
        }
    }

    let mut n = d * m * c;
    let mut color: Vec<usize> = (0..d).flat_map(|a| vec![a; m * c]).collect();
    if m >= 2 {
        for a in 0..d {
            let sel = build_selector_gadget(d, m, c);
            let sel_n = sel.graph.graph().n();
            let map: Vec<usize> = (0..sel_n)
                .map(|v| {
                    if v < m * c {
                        group(a, v / c) + v % c
                    } else {
                        n + (v - m * c)
                    }
                })
                .collect();
            for v in m * c..sel_n {
                // rotate the gadget's classes so its blocks sit in class a
                color.push((a + sel.graph.color(v)) % d);
            }
            n += sel_n - m * c;
            for e in sel.graph.graph().edges() {
                edges.push(e.iter().map(|&v| map[v]).collect());
            }
        }
    }

    let gadget_vertices = if m >= 2 { d * (m - 1) * c * (d - 1) } else { 0 };
    assert_eq!(n, d * m * c + gadget_vertices, "size accounting");
    let graph = Hypergraph::new(d, n, edges).expect("composed edges are valid");
    let graph = PartitionedHypergraph::new(graph, color).expect("composition is d-partite");
    let padded = (power(m, d) - t as u128) as usize;
    let report = make_report(t, s, d, m, padded, n);
    Ok((graph, report))
}

// ============================================================
// Matchings to clique packings
// ============================================================

/// Turns a partite set-matching instance of arity d−1 into a K_d-packing
/// instance on the same vertices plus one apex per hyperedge.
///
/// Each hyperedge becomes a d-clique through its private apex. The input
/// being (d−1)-partite, its pairwise edges carry no d-clique on their own,
/// and apexes are pairwise nonadjacent — so every K_d in the output is a
/// hyperedge with its apex, and k = ceil(n / (d−1)) disjoint cliques are a
/// perfect matching read back. Arity below 3 is rejected; those instances
/// ask for triangle packings, which this road does not reach.
pub fn reduce_pdm_to_clique_matching(
    h: &PartitionedHypergraph,
) -> Result<(SimpleGraph, usize), ComposeError> {
    let arity = h.graph().d();
    if arity < 3 {
        return Err(ComposeError::AritySmall {
            got: arity + 1,
            min: 4,
        });
    }
    let n = h.graph().n();
    let k = n.div_ceil(arity);
    let mut edges = Vec::new();
    for (idx, e) in h.graph().edges().iter().enumerate() {
        let apex = n + idx;
        for (i, &x) in e.iter().enumerate() {
            edges.push((x, apex));
            for &y in &e[i + 1..] {
                edges.push((x, y));
            }
        }
    }
    let g = SimpleGraph::new(n + h.graph().m(), edges).expect("clique edges are valid");
    Ok((g, k))
}

// ============================================================
// Cliques to multicolored bicliques
// ============================================================

/// A bipartite graph with k blocks on each side; the question is whether
/// one vertex per block can be chosen so that every cross pair is an edge.
#[derive(Debug, Clone)]
pub struct McbInstance {
    pub graph: SimpleGraph,
    pub side_u: Vec<Vec<usize>>,
    pub side_w: Vec<Vec<usize>>,
}

/// Encodes "does g have a k-clique?" as a block-partitioned biclique
/// question.
///
/// Both sides carry k blocks of n vertices, vertex (i, j) standing for
/// "the i-th clique member is v_j". Cross edges join equal picks in equal
/// blocks and adjacent picks in different blocks, so a correctly
/// partitioned K_{k,k} is exactly a clique listed once per side with
/// matching picks.
pub fn clique_to_multicolored_biclique(
    g: &SimpleGraph,
    k: usize,
) -> Result<McbInstance, ComposeError> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(ComposeError::CliqueSizeOutOfRange { k, n });
    }
    let w_base = k * n;
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..n {
            for i2 in 0..k {
                for j2 in 0..n {
                    let same = i == i2 && j == j2;
                    if same || (i != i2 && g.has_edge(j, j2)) {
                        edges.push((i * n + j, w_base + i2 * n + j2));
                    }
                }
            }
        }
    }
    let graph = SimpleGraph::new(2 * k * n, edges).expect("biclique edges are valid");
    let side_u = (0..k).map(|i| (i * n..(i + 1) * n).collect()).collect();
    let side_w = (0..k)
        .map(|i| (w_base + i * n..w_base + (i + 1) * n).collect())
        .collect();
    Ok(McbInstance {
        graph,
        side_u,
        side_w,
    })
}

fn validate_mcb(index: usize, inst: &McbInstance) -> Result<(), ComposeError> {
    let k = inst.side_u.len();
    if k == 0 || inst.side_w.len() != k {
        return Err(ComposeError::MalformedBlocks { index });
    }
    let n = inst.graph.n();
    // 1 = left side, 2 = right side, 0 = not yet placed
    let mut seen = vec![0u8; n];
    for (tag, blocks) in [(1u8, &inst.side_u), (2u8, &inst.side_w)] {
        for block in blocks.iter() {
            for &v in block {
                if v >= n || seen[v] != 0 {
                    return Err(ComposeError::MalformedBlocks { index });
                }
                seen[v] = tag;
            }
        }
    }
    if seen.iter().any(|&tag| tag == 0) {
        return Err(ComposeError::MalformedBlocks { index });
    }
    for &(x, y) in inst.graph.edges() {
        if seen[x] == seen[y] {
            return Err(ComposeError::MalformedBlocks { index });
        }
    }
    Ok(())
}

/// Merges biclique instances into one vertex-cover question that is YES iff
/// some input has its correctly partitioned K_{k,k}.
///
/// The instances tile a √t × √t grid: row groups hold left sides, column
/// groups hold right sides, and instance (i, j) contributes its cross edges
/// between row i and column j. Making each group complete k-partite turns a
/// biclique of instance (i, j) into a 2k-clique of the union, and since
/// distinct row groups (and distinct column groups) stay nonadjacent, every
/// 2k-clique arises that way. Complementing converts the clique question
/// into covering all but 2k vertices.
pub fn compose_or_mcb_to_vertex_cover(
    instances: &[McbInstance],
) -> Result<(SimpleGraph, usize, CompositionReport), ComposeError> {
    if instances.is_empty() {
        return Err(ComposeError::Empty);
    }
    for (index, inst) in instances.iter().enumerate() {
        validate_mcb(index, inst)?;
    }
    let k = instances[0].side_u.len();
    for (index, inst) in instances.iter().enumerate() {
        if inst.side_u.len() != k {
            return Err(ComposeError::MixedBlocks {
                index,
                expected: k,
                got: inst.side_u.len(),
            });
        }
    }

    let s = instances
        .iter()
        .map(|i| io::serialize_graph(&i.graph).len() * 8)
        .max()
        .unwrap_or(0);
    let t = instances.len();
    let rt = blocks_for(t, 2);
    // pad every block to nb slots; the spare slots have no cross edges, so
    // they behave like the isolated vertices they stand for
    let nb = instances
        .iter()
        .flat_map(|i| i.side_u.iter().chain(&i.side_w).map(Vec::len))
        .max()
        .unwrap_or(0)
        .max(1);

    let group_size = k * nb;
    let n_out = 2 * rt * group_size;
    let mut edges = Vec::new();
    // inside every group, vertices of different blocks are adjacent
    for grp in 0..2 * rt {
        let base = grp * group_size;
        for b in 0..k {
            for b2 in b + 1..k {
                for l in 0..nb {
                    for l2 in 0..nb {
                        edges.push((base + b * nb + l, base + b2 * nb + l2));
                    }
                }
            }
        }
    }
    for (idx, inst) in instances.iter().enumerate() {
        let at = digits(idx, rt, 2);
        let (u_base, w_base) = (at[0] * group_size, (rt + at[1]) * group_size);
        let mut loc = vec![(false, 0usize, 0usize); inst.graph.n()];
        for (tag, blocks) in [(false, &inst.side_u), (true, &inst.side_w)] {
            for (b, block) in blocks.iter().enumerate() {
                for (l, &v) in block.iter().enumerate() {
                    loc[v] = (tag, b, l);
                }
            }
        }
        for &(x, y) in inst.graph.edges() {
            let (u, w) = if loc[x].0 { (y, x) } else { (x, y) };
            let (_, bu, lu) = loc[u];
            let (_, bw, lw) = loc[w];
            edges.push((u_base + bu * nb + lu, w_base + bw * nb + lw));
        }
    }

    let g = SimpleGraph::new(n_out, edges).expect("group edges are valid");
    // rows never touch rows and columns never touch columns
    for &(x, y) in g.edges() {
        let (gx, gy) = (x / group_size, y / group_size);
        if gx != gy {
            assert!(
                (gx < rt) != (gy < rt),
                "cross-group edges must pair a row with a column"
            );
        }
    }
    assert_eq!(g.n(), 2 * rt * k * nb, "size accounting");

    let budget = n_out - 2 * k;
    let report = make_report(t, s, 2, rt, rt * rt - t, n_out);
    Ok((g.complement(), budget, report))
}

// ============================================================
// Formulas to clique and cover questions
// ============================================================

/// Which question [`compose_or_3sat`] should emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatTarget {
    Clique,
    VertexCover,
}

/// Partial assignments on exactly three of the variables `1..=s`, with a
/// consistency test.
struct AssignmentSpace {
    triples: Vec<[usize; 3]>,
}

impl AssignmentSpace {
    fn new(s: usize) -> Self {
        let triples = (1..=s)
            .combinations(3)
            .map(|c| [c[0], c[1], c[2]])
            .collect();
        Self { triples }
    }

    fn len(&self) -> usize {
        self.triples.len() * 8
    }

    /// Value of `var` under assignment `pid`, if assigned.
    fn value(&self, pid: usize, var: usize) -> Option<bool> {
        let triple = &self.triples[pid / 8];
        triple
            .iter()
            .position(|&x| x == var)
            .map(|q| pid % 8 >> q & 1 == 1)
    }

    /// Two assignments agree on every shared variable. Distinct assignments
    /// of the same triple always clash somewhere.
    fn consistent(&self, p: usize, q: usize) -> bool {
        self.triples[p / 8]
            .iter()
            .all(|&var| match (self.value(p, var), self.value(q, var)) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            })
    }

    /// The assignment makes every literal of the clause false.
    fn falsifies(&self, pid: usize, clause: &[i64; 3]) -> bool {
        clause.iter().all(|&lit| {
            self.value(pid, lit.unsigned_abs() as usize) == Some(lit < 0)
        })
    }
}

/// A 3-CNF formula no assignment satisfies: all eight sign patterns over
/// three variables.
fn unsatisfiable_padder() -> CnfFormula {
    let clauses = (0..8)
        .map(|mask: i64| {
            let lit = |v: i64, bit: i64| if mask >> bit & 1 == 1 { v } else { -v };
            [lit(1, 0), lit(2, 1), lit(3, 2)]
        })
        .collect();
    CnfFormula::new(3, clauses).expect("padder is well formed")
}

/// Merges 3-CNF formulas into one d-uniform clique (or vertex-cover)
/// question that is YES iff some formula is satisfiable.
///
/// Vertices are three-variable partial assignments, one copy of the space
/// per block on the first axis, plus a single marker vertex per block on
/// every other axis. Hyperedges connect mutually consistent assignments
/// that sit in one block per axis; a hyperedge that touches all axes names
/// a formula through its block digits and is dropped if its assignment
/// falsifies one of that formula's clauses. A clique of the target size
/// must pick one marker per axis and a consistent assignment of every
/// variable triple — a full assignment falsifying nothing, i.e. a model.
pub fn compose_or_3sat(
    formulas: &[CnfFormula],
    d: usize,
    target: SatTarget,
) -> Result<(Hypergraph, usize, CompositionReport), ComposeError> {
    if formulas.is_empty() {
        return Err(ComposeError::Empty);
    }
    if d < 2 {
        return Err(ComposeError::AritySmall { got: d, min: 2 });
    }
    let s = formulas.iter().map(CnfFormula::nvars).max().unwrap_or(0);
    if s < 3 {
        return Err(ComposeError::TooFewVariables { got: s });
    }

    let t = formulas.len();
    let m = blocks_for(t, d);
    let padder = unsatisfiable_padder();
    let grid: Vec<&CnfFormula> = (0..power(m, d) as usize)
        .map(|i| formulas.get(i).unwrap_or(&padder))
        .collect();

    let space = AssignmentSpace::new(s);
    let per_block = space.len();
    // layout: m blocks of assignments, then one marker per (axis, block)
    let n = m * per_block + (d - 1) * m;
    let axis_of = |v: usize| {
        if v < m * per_block {
            (0, v / per_block)
        } else {
            let rest = v - m * per_block;
            (1 + rest / m, rest % m)
        }
    };

    let mut edges = Vec::new();
    'subsets: for e in (0..n).combinations(d) {
        let mut block = vec![None; d];
        for &v in &e {
            let (axis, b) = axis_of(v);
            if *block[axis].get_or_insert(b) != b {
                continue 'subsets;
            }
        }
        let assigns: Vec<usize> = e
            .iter()
            .filter(|&&v| v < m * per_block)
            .map(|&v| v % per_block)
            .collect();
        for (i, &p) in assigns.iter().enumerate() {
            for &q in &assigns[i + 1..] {
                if !space.consistent(p, q) {
                    continue 'subsets;
                }
            }
        }
        if block.iter().all(Option::is_some) {
            // exactly one assignment remains; it must not refute the
            // formula this grid point names
            let idx = block
                .iter()
                .enumerate()
                .fold(0, |acc, (axis, b)| acc + b.unwrap() * power(m, axis) as usize);
            let pid = assigns[0];
            if grid[idx].clauses().iter().any(|c| space.falsifies(pid, c)) {
                continue 'subsets;
            }
        }
        edges.push(e);
    }

    let g = Hypergraph::new(d, n, edges).expect("assignment edges are valid");
    let k = binomial(s as u64, 3) as usize + d - 1;
    let s_bits = formulas
        .iter()
        .map(|f| io::serialize_cnf(f).len() * 8)
        .max()
        .unwrap_or(0);
    let padded = (power(m, d) - t as u128) as usize;
    let report = make_report(t, s_bits, d, m, padded, n);
    match target {
        SatTarget::Clique => Ok((g, k, report)),
        SatTarget::VertexCover => Ok((g.complement()?, n - k, report)),
    }
}

// ============================================================
// Factor instances
// ============================================================

/// Merges H-factor instances into one graph with an H-factor iff some input
/// has one. Only complete patterns are supported: the hyperedge gadget
/// exposes one terminal per pattern vertex, so it can stand in for a
/// selector hyperedge only when the selector's arity — the pattern's
/// chromatic number — equals its vertex count.
///
/// Inputs must be p-partite in the canonical layout (part c is the c-th
/// chunk of n consecutive vertices) and are padded to a common part size
/// with disjoint pattern copies, which cover themselves and nothing else.
/// The instances land on disjoint p-cliques of the naive packing structure,
/// blown up by n; one selector per color class, its hyperedges replaced by
/// hyperedge gadgets, covers everything outside a single instance.
pub fn compose_or_hfactor(
    instances: &[SimpleGraph],
    h: &HPattern,
) -> Result<(SimpleGraph, CompositionReport), ComposeError> {
    if instances.is_empty() {
        return Err(ComposeError::Empty);
    }
    if !h.is_connected() {
        return Err(ComposeError::DisconnectedPattern);
    }
    let d = h.vertex_count();
    if d < 3 {
        return Err(ComposeError::AritySmall { got: d, min: 3 });
    }
    let p = h.chromatic_number();
    if p != d {
        return Err(ComposeError::IncompletePattern {
            chi: p,
            vertices: d,
        });
    }

    let t = instances.len();
    let mut part_sizes = Vec::with_capacity(t);
    for (index, g) in instances.iter().enumerate() {
        if g.n() % p != 0 {
            return Err(ComposeError::UnevenParts { index, parts: p });
        }
        let ni = g.n() / p;
        for &(x, y) in g.edges() {
            if x / ni == y / ni {
                return Err(ComposeError::EdgeInsidePart {
                    index,
                    part: x / ni,
                });
            }
        }
        part_sizes.push(ni);
    }
    // selector blocks need at least 2 slots once there is a choice to make
    let floor = if t >= 2 { 2 } else { 0 };
    let n = part_sizes.iter().copied().max().unwrap().max(floor);

    let (_, cliques) = naive_packing_structure(p, t).expect("packing parameters are in range");
    let spot = |i: usize, c: usize, l: usize| cliques[i][c] * n + l;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, g) in instances.iter().enumerate() {
        let ni = part_sizes[i];
        for &(x, y) in g.edges() {
            edges.push((spot(i, x / ni, x % ni), spot(i, y / ni, y % ni)));
        }
        // spare slots hold disjoint pattern copies: they cover themselves
        // exactly, leaving the instance's answer alone
        for l in ni..n {
            for c in 0..p {
                for c2 in c + 1..p {
                    edges.push((spot(i, c, l), spot(i, c2, l)));
                }
            }
        }
    }

    let mut total = p * t * n;
    let mut hyperedges: Vec<Vec<usize>> = Vec::new();
    if t >= 2 {
        for c in 0..p {
            let sel = build_selector_gadget(p, t, n);
            let sel_n = sel.graph.graph().n();
            let map: Vec<usize> = (0..sel_n)
                .map(|v| {
                    if v < t * n {
                        spot(v / n, c, v % n)
                    } else {
                        total + (v - t * n)
                    }
                })
                .collect();
            total += sel_n - t * n;
            for e in sel.graph.graph().edges() {
                hyperedges.push(e.iter().map(|&v| map[v]).collect());
            }
        }
    }

    // each selector hyperedge becomes its own gadget copy; terminals take
    // the hyperedge's vertices, the interior is fresh
    let gadget = build_hyperedge_gadget(h);
    for e in &hyperedges {
        let mut map = vec![usize::MAX; gadget.graph.n()];
        for (q, &term) in gadget.terminals.iter().enumerate() {
            map[term] = e[q];
        }
        for slot in map.iter_mut() {
            if *slot == usize::MAX {
                *slot = total;
                total += 1;
            }
        }
        for &(x, y) in gadget.graph.edges() {
            edges.push((map[x], map[y]));
        }
    }

    let out = SimpleGraph::new(total, edges).expect("factor edges are valid");
    let s_bits = instances
        .iter()
        .map(|g| io::serialize_graph(g).len() * 8)
        .max()
        .unwrap_or(0);
    let report = make_report(t, s_bits, p, t, 0, total);
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::oracle::{
        has_h_factor, has_multicolored_biclique, has_perfect_matching, h_matching_at_least,
        max_clique, min_vertex_cover, sat3, OracleBudget,
    };

    fn budget() -> OracleBudget {
        OracleBudget::default()
    }

    /// A d-partite instance with classes of size `cs` laid out in chunks.
    fn pdm_instance(d: usize, cs: usize, edges: Vec<Vec<usize>>) -> PartitionedHypergraph {
        let color = (0..d * cs).map(|v| v / cs).collect();
        let g = Hypergraph::new(d, d * cs, edges).unwrap();
        PartitionedHypergraph::new(g, color).unwrap()
    }

    fn random_pdm(rng: &mut ChaCha8Rng, d: usize, cs: usize) -> PartitionedHypergraph {
        let mut edges = Vec::new();
        for idx in 0..power(cs, d) as usize {
            if rng.gen_bool(0.4) {
                let digit = digits(idx, cs, d);
                edges.push((0..d).map(|a| a * cs + digit[a]).collect());
            }
        }
        pdm_instance(d, cs, edges)
    }

    #[test]
    fn or_pdm_matches_the_pinned_example() {
        let yes = pdm_instance(3, 1, vec![vec![0, 1, 2]]);
        let no = pdm_instance(3, 1, vec![]);
        for winner in [0, 3, 7] {
            let instances: Vec<_> = (0..8)
                .map(|i| if i == winner { yes.clone() } else { no.clone() })
                .collect();
            let (out, report) = compose_or_perfect_dm(&instances, 3).unwrap();
            assert!(has_perfect_matching(out.graph(), budget()).unwrap());
            assert_eq!(report.blocks_per_class, 2);
            assert_eq!(report.padded_instances, 0);
            // 3 classes of 2 blocks of 2 slots, plus 3 one-switch selectors
            assert_eq!(report.output_vertices, 12 + 12);
            assert_eq!(report.output_vertices, out.graph().n());
        }
        let (out, _) = compose_or_perfect_dm(&vec![no; 8], 3).unwrap();
        assert!(!has_perfect_matching(out.graph(), budget()).unwrap());
    }

    #[test]
    fn or_pdm_passes_single_instances_through() {
        let yes = pdm_instance(3, 1, vec![vec![0, 1, 2]]);
        let no = pdm_instance(3, 1, vec![]);
        for (inst, answer) in [(yes, true), (no, false)] {
            let (out, report) = compose_or_perfect_dm(&[inst], 3).unwrap();
            assert_eq!(report.blocks_per_class, 1);
            assert_eq!(out.graph().n(), 6, "no gadgets at a single block");
            assert_eq!(has_perfect_matching(out.graph(), budget()).unwrap(), answer);
        }
    }

    #[test]
    fn or_pdm_keeps_uneven_instances_unmatchable() {
        let color = vec![0, 0, 1, 2];
        let g = Hypergraph::new(3, 4, vec![vec![0, 2, 3]]).unwrap();
        let uneven = PartitionedHypergraph::new(g, color).unwrap();
        let (out, _) = compose_or_perfect_dm(&[uneven], 3).unwrap();
        assert!(!has_perfect_matching(out.graph(), budget()).unwrap());
    }

    #[test]
    fn or_pdm_rejects_wrong_arity_and_empty_lists() {
        assert_eq!(
            compose_or_perfect_dm(&[], 3).unwrap_err(),
            ComposeError::Empty
        );
        let flat = pdm_instance(3, 1, vec![]);
        assert_eq!(
            compose_or_perfect_dm(&[flat.clone()], 2).unwrap_err(),
            ComposeError::AritySmall { got: 2, min: 3 }
        );
        assert!(matches!(
            compose_or_perfect_dm(&[flat], 4).unwrap_err(),
            ComposeError::MixedArity { index: 0, .. }
        ));
    }

    #[test]
    fn or_pdm_agrees_with_the_oracle_on_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(251);
        for _ in 0..100 {
            let t = rng.gen_range(1..=5);
            let instances: Vec<_> = (0..t)
                .map(|_| {
                    let cs = rng.gen_range(1..=2);
                    random_pdm(&mut rng, 3, cs)
                })
                .collect();
            let expected = instances
                .iter()
                .any(|i| has_perfect_matching(i.graph(), budget()).unwrap());
            let (out, report) = compose_or_perfect_dm(&instances, 3).unwrap();
            assert_eq!(
                has_perfect_matching(out.graph(), budget()).unwrap(),
                expected
            );
            assert_eq!(report.output_vertices, out.graph().n());
            assert_eq!(report.t, t);
        }
    }

    #[test]
    fn kd_reduction_turns_edges_into_cliques() {
        let single = pdm_instance(3, 1, vec![vec![0, 1, 2]]);
        let (g, k) = reduce_pdm_to_clique_matching(&single).unwrap();
        assert_eq!((g.n(), g.m(), k), (4, 6, 1), "one hyperedge, one K_4");
        assert!(h_matching_at_least(&g, &HPattern::clique(4), k, budget()).unwrap());

        let twin = pdm_instance(3, 2, vec![vec![0, 2, 4], vec![1, 3, 5]]);
        let (g, k) = reduce_pdm_to_clique_matching(&twin).unwrap();
        assert_eq!((g.n(), g.m(), k), (8, 12, 2), "two disjoint K_4s");
        assert!(h_matching_at_least(&g, &HPattern::clique(4), k, budget()).unwrap());
    }

    #[test]
    fn kd_reduction_rejects_low_arity() {
        let color = vec![0, 1];
        let g = Hypergraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        let flat = PartitionedHypergraph::new(g, color).unwrap();
        assert_eq!(
            reduce_pdm_to_clique_matching(&flat).unwrap_err(),
            ComposeError::AritySmall { got: 3, min: 4 }
        );
    }

    #[test]
    fn kd_reduction_tracks_the_matching_oracle() {
        let k4 = HPattern::clique(4);
        let mut rng = ChaCha8Rng::seed_from_u64(257);
        for _ in 0..100 {
            let cs = rng.gen_range(1..=3);
            let h = random_pdm(&mut rng, 3, cs);
            let expected = has_perfect_matching(h.graph(), budget()).unwrap();
            let (g, k) = reduce_pdm_to_clique_matching(&h).unwrap();
            assert_eq!(
                h_matching_at_least(&g, &k4, k, budget()).unwrap(),
                expected
            );
        }
    }

    #[test]
    fn mcb_translation_matches_the_pinned_examples() {
        let k3 = SimpleGraph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap();
        let out = clique_to_multicolored_biclique(&k3, 3).unwrap();
        assert!(has_multicolored_biclique(&out.graph, &out.side_u, &out.side_w));

        let path = SimpleGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let out = clique_to_multicolored_biclique(&path, 3).unwrap();
        assert!(!has_multicolored_biclique(&out.graph, &out.side_u, &out.side_w));

        let dot = SimpleGraph::new(1, vec![]).unwrap();
        let out = clique_to_multicolored_biclique(&dot, 1).unwrap();
        assert!(has_multicolored_biclique(&out.graph, &out.side_u, &out.side_w));
    }

    #[test]
    fn mcb_translation_tracks_the_clique_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(263);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = SimpleGraph::new(n, edges).unwrap();
            let k = rng.gen_range(1..=3.min(n));
            let expected = max_clique(&g.to_hypergraph(), budget()).unwrap() >= k;
            let out = clique_to_multicolored_biclique(&g, k).unwrap();
            assert_eq!(
                has_multicolored_biclique(&out.graph, &out.side_u, &out.side_w),
                expected
            );
        }
    }

    /// A one-block instance: two singleton blocks, one optional cross edge.
    fn tiny_mcb(yes: bool) -> McbInstance {
        let edges = if yes { vec![(0, 1)] } else { vec![] };
        McbInstance {
            graph: SimpleGraph::new(2, edges).unwrap(),
            side_u: vec![vec![0]],
            side_w: vec![vec![1]],
        }
    }

    #[test]
    fn or_mcb_matches_the_pinned_example() {
        for winner in 0..4 {
            let instances: Vec<_> = (0..4).map(|i| tiny_mcb(i == winner)).collect();
            let (cover_g, budget_k, report) =
                compose_or_mcb_to_vertex_cover(&instances).unwrap();
            assert_eq!(report.output_vertices, 2 * 2 * 1 * 1);
            assert_eq!(budget_k, report.output_vertices - 2);
            let vc = min_vertex_cover(&cover_g.to_hypergraph(), budget()).unwrap();
            assert!(vc <= budget_k, "one winner must fit the cover budget");
        }
        let all_no: Vec<_> = (0..4).map(|_| tiny_mcb(false)).collect();
        let (cover_g, budget_k, _) = compose_or_mcb_to_vertex_cover(&all_no).unwrap();
        let vc = min_vertex_cover(&cover_g.to_hypergraph(), budget()).unwrap();
        assert!(vc > budget_k);
    }

    #[test]
    fn or_mcb_rejects_mismatched_blocks() {
        let one = tiny_mcb(true);
        let two = McbInstance {
            graph: SimpleGraph::new(4, vec![]).unwrap(),
            side_u: vec![vec![0], vec![1]],
            side_w: vec![vec![2], vec![3]],
        };
        assert_eq!(
            compose_or_mcb_to_vertex_cover(&[one, two]).unwrap_err(),
            ComposeError::MixedBlocks {
                index: 1,
                expected: 1,
                got: 2
            }
        );
    }

    #[test]
    fn or_mcb_rejects_malformed_instances() {
        let overlapping = McbInstance {
            graph: SimpleGraph::new(2, vec![]).unwrap(),
            side_u: vec![vec![0]],
            side_w: vec![vec![0]],
        };
        assert_eq!(
            compose_or_mcb_to_vertex_cover(&[overlapping]).unwrap_err(),
            ComposeError::MalformedBlocks { index: 0 }
        );
        let sided = McbInstance {
            graph: SimpleGraph::new(2, vec![(0, 1)]).unwrap(),
            side_u: vec![vec![0, 1]],
            side_w: vec![vec![]],
        };
        assert!(compose_or_mcb_to_vertex_cover(&[sided]).is_err());
    }

    fn random_mcb(rng: &mut ChaCha8Rng, k: usize, nb: usize) -> McbInstance {
        let n = 2 * k * nb;
        let mut edges = Vec::new();
        for u in 0..k * nb {
            for w in k * nb..n {
                if rng.gen_bool(0.5) {
                    edges.push((u, w));
                }
            }
        }
        McbInstance {
            graph: SimpleGraph::new(n, edges).unwrap(),
            side_u: (0..k).map(|b| (b * nb..(b + 1) * nb).collect()).collect(),
            side_w: (0..k)
                .map(|b| (k * nb + b * nb..k * nb + (b + 1) * nb).collect())
                .collect(),
        }
    }

    #[test]
    fn or_mcb_agrees_with_the_oracle_on_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(269);
        for _ in 0..100 {
            let t = rng.gen_range(1..=4);
            let k = rng.gen_range(1..=2);
            let instances: Vec<_> = (0..t)
                .map(|_| {
                    let nb = rng.gen_range(1..=2);
                    random_mcb(&mut rng, k, nb)
                })
                .collect();
            let expected = instances
                .iter()
                .any(|i| has_multicolored_biclique(&i.graph, &i.side_u, &i.side_w));
            let (cover_g, budget_k, _) = compose_or_mcb_to_vertex_cover(&instances).unwrap();
            let vc = min_vertex_cover(&cover_g.to_hypergraph(), budget()).unwrap();
            assert_eq!(vc <= budget_k, expected);
        }
    }

    #[test]
    fn or_3sat_reaches_the_clique_bound_exactly_when_satisfiable() {
        let satisfiable = CnfFormula::new(3, vec![[1, 2, 3]]).unwrap();
        let (g, k, report) = compose_or_3sat(&[satisfiable], 2, SatTarget::Clique).unwrap();
        assert_eq!(k, 2, "one triple plus one marker");
        assert_eq!(report.output_vertices, 9);
        assert_eq!(max_clique(&g, budget()).unwrap(), k);

        let unsat = unsatisfiable_padder();
        let (g, k, _) =
            compose_or_3sat(&vec![unsat; 4], 2, SatTarget::Clique).unwrap();
        assert!(max_clique(&g, budget()).unwrap() < k);
    }

    #[test]
    fn or_3sat_vertex_cover_target_matches() {
        // four variables, one satisfiable formula among four
        let satisfiable = CnfFormula::new(4, vec![[1, -2, 4], [-1, 2, 3]]).unwrap();
        let unsat = unsatisfiable_padder();
        let formulas = [unsat.clone(), satisfiable, unsat.clone(), unsat];
        let (g, vc_budget, report) =
            compose_or_3sat(&formulas, 2, SatTarget::VertexCover).unwrap();
        assert_eq!(report.output_vertices, 2 * 8 * 4 + 2);
        assert_eq!(vc_budget, report.output_vertices - 5);
        let vc = min_vertex_cover(&g, budget()).unwrap();
        assert!(vc <= vc_budget);
    }

    #[test]
    fn or_3sat_agrees_with_the_oracle_on_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(271);
        for round in 0..100 {
            let d = if round % 5 == 0 { 3 } else { 2 };
            let t = rng.gen_range(1..=if d == 3 { 2 } else { 4 });
            let formulas: Vec<_> = (0..t)
                .map(|_| {
                    let clauses = (0..rng.gen_range(2..=3))
                        .map(|_| {
                            let mut c = [0i64; 3];
                            for lit in c.iter_mut() {
                                let var = rng.gen_range(1..=3) as i64;
                                *lit = if rng.gen_bool(0.5) { var } else { -var };
                            }
                            c
                        })
                        .collect();
                    CnfFormula::new(3, clauses).unwrap()
                })
                .collect();
            let expected = formulas.iter().any(|f| sat3(f).unwrap());
            let (g, k, _) = compose_or_3sat(&formulas, d, SatTarget::Clique).unwrap();
            assert_eq!(max_clique(&g, budget()).unwrap() >= k, expected);
        }
    }

    /// Three vertices in three parts: complete iff `yes`.
    fn tri_instance(yes: bool) -> SimpleGraph {
        let edges = if yes {
            vec![(0, 1), (0, 2), (1, 2)]
        } else {
            vec![]
        };
        SimpleGraph::new(3, edges).unwrap()
    }

    #[test]
    fn or_hfactor_matches_the_pinned_example() {
        let h = HPattern::clique(3);
        for winner in 0..2 {
            let instances: Vec<_> = (0..2).map(|i| tri_instance(i == winner)).collect();
            let (out, report) = compose_or_hfactor(&instances, &h).unwrap();
            assert_eq!(report.output_vertices, out.n());
            assert!(has_h_factor(&out, &h, budget()).unwrap());
        }
        let (out, _) = compose_or_hfactor(&[tri_instance(false), tri_instance(false)], &h).unwrap();
        assert!(!has_h_factor(&out, &h, budget()).unwrap());
    }

    #[test]
    fn or_hfactor_passes_single_instances_through() {
        let h = HPattern::clique(3);
        let (out, report) = compose_or_hfactor(&[tri_instance(true)], &h).unwrap();
        assert_eq!(out.n(), 3, "no padding or gadgets for a lone instance");
        assert_eq!(report.blocks_per_class, 1);
        assert!(has_h_factor(&out, &h, budget()).unwrap());
        let (out, _) = compose_or_hfactor(&[tri_instance(false)], &h).unwrap();
        assert!(!has_h_factor(&out, &h, budget()).unwrap());
    }

    #[test]
    fn or_hfactor_rejects_what_it_cannot_speak_for() {
        let k3 = HPattern::clique(3);
        assert_eq!(
            compose_or_hfactor(&[], &k3).unwrap_err(),
            ComposeError::Empty
        );
        assert_eq!(
            compose_or_hfactor(&[tri_instance(true)], &HPattern::path(2)).unwrap_err(),
            ComposeError::IncompletePattern {
                chi: 2,
                vertices: 3
            }
        );
        let split = SimpleGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            compose_or_hfactor(&[tri_instance(true)], &HPattern::new(split).unwrap())
                .unwrap_err(),
            ComposeError::DisconnectedPattern
        );
        let lopsided = SimpleGraph::new(4, vec![]).unwrap();
        assert_eq!(
            compose_or_hfactor(&[lopsided], &k3).unwrap_err(),
            ComposeError::UnevenParts { index: 0, parts: 3 }
        );
        let in_part = SimpleGraph::new(6, vec![(0, 1)]).unwrap();
        assert_eq!(
            compose_or_hfactor(&[in_part], &k3).unwrap_err(),
            ComposeError::EdgeInsidePart { index: 0, part: 0 }
        );
    }

    #[test]
    fn or_hfactor_agrees_with_the_oracle_on_random_tuples() {
        let h = HPattern::clique(3);
        let mut rng = ChaCha8Rng::seed_from_u64(277);
        for _ in 0..100 {
            let t = rng.gen_range(1..=2);
            let instances: Vec<_> = (0..t)
                .map(|_| {
                    let mut edges = Vec::new();
                    for u in 0..3 {
                        for v in u + 1..3 {
                            if rng.gen_bool(0.6) {
                                edges.push((u, v));
                            }
                        }
                    }
                    SimpleGraph::new(3, edges).unwrap()
                })
                .collect();
            let expected = instances
                .iter()
                .any(|g| has_h_factor(g, &h, budget()).unwrap());
            let (out, _) = compose_or_hfactor(&instances, &h).unwrap();
            assert_eq!(has_h_factor(&out, &h, budget()).unwrap(), expected);
        }
    }
}
