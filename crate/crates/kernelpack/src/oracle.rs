//! Exact reference solvers used as ground truth by every kernelizer,
//! gadget check and reduction test in this crate.
//!
//! These are branch-and-bound and exhaustive searches meant for desk-scale
//! instances. They never return heuristic answers: when the search budget
//! runs out the result is an explicit [`OracleError::BudgetExhausted`], so a
//! verification harness can skip a trial but can never record a wrong
//! ground truth.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{CnfFormula, HPattern, Hypergraph, SimpleGraph, WeightedPathGraph};

/// Search limits for the exact solvers.
///
/// `max_nodes` is the deterministic limiter; `timeout_ms` is a wall-clock
/// backstop that is effectively infinite by default so that equal seeds
/// produce byte-identical reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_nodes: u64,
    pub timeout_ms: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_nodes: 50_000_000,
            timeout_ms: 3_600_000,
        }
    }
}

impl OracleBudget {
    pub fn with_nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes,
            ..Self::default()
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    /// The search was cut off; the true answer is unknown.
    #[error("oracle budget exhausted after {nodes} search nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("instance too large for exact search: {0}")]
    TooLarge(String),
}

pub type OracleResult<T> = Result<T, OracleError>;

/// Node counter plus wall-clock backstop, threaded through every search.
struct Meter {
    used: u64,
    cap: u64,
    deadline: Instant,
}

impl Meter {
    fn new(budget: OracleBudget) -> Self {
        Self {
            used: 0,
            cap: budget.max_nodes,
            deadline: Instant::now() + Duration::from_millis(budget.timeout_ms),
        }
    }

    #[inline]
    fn tick(&mut self) -> OracleResult<()> {
        self.used += 1;
        if self.used > self.cap || (self.used % 8192 == 0 && Instant::now() > self.deadline) {
            return Err(OracleError::BudgetExhausted { nodes: self.used });
        }
        Ok(())
    }
}

fn to_bitset(n: usize, vertices: &[usize]) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    for &v in vertices {
        b.insert(v);
    }
    b
}

// ============================================================
// Disjoint-set packing core
// ============================================================

/// Maximum number of pairwise-disjoint sets, by branch and bound.
///
/// `sets` must be in a fixed order with nondecreasing minima (canonical
/// sorted order has this); `mins[j]` is the smallest element of `sets[j]`.
/// With `target = Some(k)` the search stops as soon as k disjoint sets are
/// found, so the return value is only guaranteed to be `>= k` or the true
/// maximum, whichever is smaller.
fn pack_disjoint(
    n: usize,
    sets: &[FixedBitSet],
    mins: &[usize],
    target: Option<usize>,
    meter: &mut Meter,
) -> OracleResult<usize> {
    let mut best = 0;
    // Greedy incumbent tightens pruning from the start.
    {
        let mut used = FixedBitSet::with_capacity(n);
        for s in sets {
            if s.is_disjoint(&used) {
                used.union_with(s);
                best += 1;
            }
        }
    }
    if let Some(t) = target {
        if best >= t {
            return Ok(best);
        }
    }

    fn rec(
        sets: &[FixedBitSet],
        mins: &[usize],
        from: usize,
        used: &mut FixedBitSet,
        count: usize,
        best: &mut usize,
        target: Option<usize>,
        meter: &mut Meter,
    ) -> OracleResult<bool> {
        meter.tick()?;
        if count > *best {
            *best = count;
        }
        if let Some(t) = target {
            if *best >= t {
                return Ok(true);
            }
        }
        let avail: Vec<usize> = (from..sets.len())
            .filter(|&j| sets[j].is_disjoint(used))
            .collect();
        // Disjoint sets have distinct minima, so the number of distinct
        // minima among the available sets bounds any extension.
        let mut ub = 0;
        let mut last_min = usize::MAX;
        for &j in &avail {
            if mins[j] != last_min {
                ub += 1;
                last_min = mins[j];
            }
        }
        let enough = match target {
            Some(t) => count + ub >= t,
            None => count + ub > *best,
        };
        if !enough {
            return Ok(false);
        }
        for &j in &avail {
            used.union_with(&sets[j]);
            let stop = rec(sets, mins, j + 1, used, count + 1, best, target, meter)?;
            used.difference_with(&sets[j]);
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    let mut used = FixedBitSet::with_capacity(n);
    rec(sets, mins, 0, &mut used, 0, &mut best, target, meter)?;
    Ok(best)
}

fn packing_inputs(n: usize, sets: Vec<Vec<usize>>) -> (Vec<FixedBitSet>, Vec<usize>) {
    // Callers pass sorted, deduplicated sets in canonical order.
    let mins = sets.iter().map(|s| s[0]).collect();
    let bits = sets.iter().map(|s| to_bitset(n, s)).collect();
    (bits, mins)
}

/// Exact maximum number of pairwise-disjoint sets from the given family.
/// Sets may arrive in any order and need not be sorted; empty sets are
/// rejected. With `target = Some(k)` the search may stop early once k
/// disjoint sets are found.
pub fn max_disjoint_sets(
    n: usize,
    sets: &[Vec<usize>],
    target: Option<usize>,
    budget: OracleBudget,
) -> OracleResult<usize> {
    let mut canon: Vec<Vec<usize>> = Vec::with_capacity(sets.len());
    for s in sets {
        assert!(!s.is_empty(), "empty sets cannot be packed");
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        canon.push(s);
    }
    canon.sort();
    canon.dedup();
    let mut meter = Meter::new(budget);
    let (bits, mins) = packing_inputs(n, canon);
    pack_disjoint(n, &bits, &mins, target, &mut meter)
}

// ============================================================
// Set matching
// ============================================================

/// Exact maximum number of pairwise-disjoint hyperedges.
pub fn max_set_matching(h: &Hypergraph, budget: OracleBudget) -> OracleResult<usize> {
    let mut meter = Meter::new(budget);
    let (sets, mins) = packing_inputs(h.n(), h.edges().to_vec());
    pack_disjoint(h.n(), &sets, &mins, None, &mut meter)
}

/// Decision form: is there a matching of at least `k` disjoint hyperedges?
pub fn set_matching_at_least(h: &Hypergraph, k: usize, budget: OracleBudget) -> OracleResult<bool> {
    if k == 0 {
        return Ok(true);
    }
    let mut meter = Meter::new(budget);
    let (sets, mins) = packing_inputs(h.n(), h.edges().to_vec());
    Ok(pack_disjoint(h.n(), &sets, &mins, Some(k), &mut meter)? >= k)
}

/// True iff `n/d` disjoint edges cover every vertex; false when d does not
/// divide n.
pub fn has_perfect_matching(h: &Hypergraph, budget: OracleBudget) -> OracleResult<bool> {
    if h.n() == 0 {
        return Ok(true);
    }
    if h.n() % h.d() != 0 {
        return Ok(false);
    }
    let mut meter = Meter::new(budget);
    let sets: Vec<FixedBitSet> = h.edges().iter().map(|e| to_bitset(h.n(), e)).collect();
    let by_vertex = edges_by_vertex(h.n(), h.edges());
    let mut used = FixedBitSet::with_capacity(h.n());
    cover_all(&sets, &by_vertex, &mut used, 0, &mut meter)
}

/// Number of perfect matchings, by exhaustive cover search.
pub fn count_perfect_matchings(h: &Hypergraph, budget: OracleBudget) -> OracleResult<u64> {
    if h.n() == 0 {
        return Ok(1);
    }
    if h.n() % h.d() != 0 {
        return Ok(0);
    }
    let mut meter = Meter::new(budget);
    let sets: Vec<FixedBitSet> = h.edges().iter().map(|e| to_bitset(h.n(), e)).collect();
    let by_vertex = edges_by_vertex(h.n(), h.edges());

    fn rec(
        sets: &[FixedBitSet],
        by_vertex: &[Vec<usize>],
        used: &mut FixedBitSet,
        low: usize,
        meter: &mut Meter,
    ) -> OracleResult<u64> {
        meter.tick()?;
        let mut v = low;
        while v < by_vertex.len() && used.contains(v) {
            v += 1;
        }
        if v == by_vertex.len() {
            return Ok(1);
        }
        let mut total = 0u64;
        for &j in &by_vertex[v] {
            if sets[j].is_disjoint(used) {
                used.union_with(&sets[j]);
                total += rec(sets, by_vertex, used, v + 1, meter)?;
                used.difference_with(&sets[j]);
            }
        }
        Ok(total)
    }

    let mut used = FixedBitSet::with_capacity(h.n());
    rec(&sets, &by_vertex, &mut used, 0, &mut meter)
}

fn edges_by_vertex(n: usize, edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut by_vertex = vec![Vec::new(); n];
    for (j, e) in edges.iter().enumerate() {
        for &v in e {
            by_vertex[v].push(j);
        }
    }
    by_vertex
}

/// Covers the lowest free vertex first; complete search with backtracking.
fn cover_all(
    sets: &[FixedBitSet],
    by_vertex: &[Vec<usize>],
    used: &mut FixedBitSet,
    low: usize,
    meter: &mut Meter,
) -> OracleResult<bool> {
    meter.tick()?;
    let mut v = low;
    while v < by_vertex.len() && used.contains(v) {
        v += 1;
    }
    if v == by_vertex.len() {
        return Ok(true);
    }
    for &j in &by_vertex[v] {
        if sets[j].is_disjoint(used) {
            used.union_with(&sets[j]);
            if cover_all(sets, by_vertex, used, v + 1, meter)? {
                used.difference_with(&sets[j]);
                return Ok(true);
            }
            used.difference_with(&sets[j]);
        }
    }
    Ok(false)
}

// ============================================================
// H-matching
// ============================================================

/// All vertex sets carrying a subgraph isomorphic to `h`, as bitsets in
/// canonical order. The count can be large; the meter bounds the work.
fn h_copies(
    g: &SimpleGraph,
    h: &HPattern,
    meter: &mut Meter,
) -> OracleResult<(Vec<FixedBitSet>, Vec<usize>)> {
    let p = h.vertex_count();
    if p > 6 {
        return Err(OracleError::TooLarge(format!(
            "pattern has {p} vertices, exact search supports at most 6"
        )));
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    if p > g.n() {
        return Ok((Vec::new(), Vec::new()));
    }
    let gadj = g.adjacency();
    let hadj = h.graph().adjacency();

    if h.is_connected() {
        // Placement order where each pattern vertex after the first touches
        // an earlier one, so images extend along graph edges only.
        let mut order = vec![0usize];
        let mut placed = vec![false; p];
        placed[0] = true;
        while order.len() < p {
            let next = (0..p)
                .find(|&v| !placed[v] && hadj[v].iter().any(|&w| placed[w]))
                .expect("connected pattern always extends");
            placed[next] = true;
            order.push(next);
        }
        let mut pos_in_order = vec![0usize; p];
        for (i, &v) in order.iter().enumerate() {
            pos_in_order[v] = i;
        }

        fn embed(
            g: &SimpleGraph,
            gadj: &[Vec<usize>],
            hadj: &[Vec<usize>],
            order: &[usize],
            pos_in_order: &[usize],
            image: &mut Vec<usize>,
            used: &mut FixedBitSet,
            found: &mut BTreeSet<Vec<usize>>,
            meter: &mut Meter,
        ) -> OracleResult<()> {
            meter.tick()?;
            let slot = image.len();
            if slot == order.len() {
                let mut set = image.clone();
                set.sort_unstable();
                found.insert(set);
                return Ok(());
            }
            let hv = order[slot];
            // Earlier pattern neighbors constrain the candidate images.
            let anchors: Vec<usize> = hadj[hv]
                .iter()
                .filter(|&&w| pos_in_order[w] < slot)
                .map(|&w| image[pos_in_order[w]])
                .collect();
            let candidates: Vec<usize> = if slot == 0 {
                (0..g.n()).collect()
            } else {
                gadj[anchors[0]].clone()
            };
            for cand in candidates {
                if used.contains(cand) {
                    continue;
                }
                if anchors.iter().all(|&a| g.has_edge(a, cand)) {
                    used.insert(cand);
                    image.push(cand);
                    embed(g, gadj, hadj, order, pos_in_order, image, used, found, meter)?;
                    image.pop();
                    used.remove(cand);
                }
            }
            Ok(())
        }

        let mut image = Vec::with_capacity(p);
        let mut used = FixedBitSet::with_capacity(g.n());
        embed(
            g, &gadj, &hadj, &order, &pos_in_order, &mut image, &mut used, &mut found, meter,
        )?;
    } else {
        // Disconnected patterns: check each p-subset by permutation search.
        let mut subset: Vec<usize> = (0..p).collect();
        loop {
            meter.tick()?;
            if spans_pattern(g, &hadj, &subset, meter)? {
                found.insert(subset.clone());
            }
            if !advance_subset(&mut subset, g.n()) {
                break;
            }
        }
    }

    let sets: Vec<Vec<usize>> = found.into_iter().collect();
    Ok(packing_inputs(g.n(), sets))
}

/// Does `g[subset]` contain a spanning subgraph isomorphic to the pattern
/// with adjacency `hadj`?
fn spans_pattern(
    g: &SimpleGraph,
    hadj: &[Vec<usize>],
    subset: &[usize],
    meter: &mut Meter,
) -> OracleResult<bool> {
    let p = hadj.len();
    fn rec(
        g: &SimpleGraph,
        hadj: &[Vec<usize>],
        subset: &[usize],
        image: &mut Vec<usize>,
        taken: &mut [bool],
        meter: &mut Meter,
    ) -> OracleResult<bool> {
        meter.tick()?;
        let slot = image.len();
        if slot == hadj.len() {
            return Ok(true);
        }
        for (i, &cand) in subset.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let ok = hadj[slot]
                .iter()
                .filter(|&&w| w < slot)
                .all(|&w| g.has_edge(image[w], cand));
            if ok {
                taken[i] = true;
                image.push(cand);
                if rec(g, hadj, subset, image, taken, meter)? {
                    return Ok(true);
                }
                image.pop();
                taken[i] = false;
            }
        }
        Ok(false)
    }
    let mut image = Vec::with_capacity(p);
    let mut taken = vec![false; subset.len()];
    rec(g, hadj, subset, &mut image, &mut taken, meter)
}

fn advance_subset(subset: &mut [usize], n: usize) -> bool {
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

/// Exact maximum number of vertex-disjoint copies of the pattern.
pub fn max_h_matching(g: &SimpleGraph, h: &HPattern, budget: OracleBudget) -> OracleResult<usize> {
    let mut meter = Meter::new(budget);
    let (sets, mins) = h_copies(g, h, &mut meter)?;
    pack_disjoint(g.n(), &sets, &mins, None, &mut meter)
}

/// Decision form of [`max_h_matching`].
pub fn h_matching_at_least(
    g: &SimpleGraph,
    h: &HPattern,
    k: usize,
    budget: OracleBudget,
) -> OracleResult<bool> {
    if k == 0 {
        return Ok(true);
    }
    let mut meter = Meter::new(budget);
    let (sets, mins) = h_copies(g, h, &mut meter)?;
    Ok(pack_disjoint(g.n(), &sets, &mins, Some(k), &mut meter)? >= k)
}

/// True iff vertex-disjoint copies of the pattern cover every vertex.
pub fn has_h_factor(g: &SimpleGraph, h: &HPattern, budget: OracleBudget) -> OracleResult<bool> {
    if g.n() == 0 {
        return Ok(true);
    }
    if g.n() % h.vertex_count() != 0 {
        return Ok(false);
    }
    let mut meter = Meter::new(budget);
    let (sets, _) = h_copies(g, h, &mut meter)?;
    let lists: Vec<Vec<usize>> = sets.iter().map(|s| s.ones().collect()).collect();
    let by_vertex = edges_by_vertex(g.n(), &lists);
    let mut used = FixedBitSet::with_capacity(g.n());
    cover_all(&sets, &by_vertex, &mut used, 0, &mut meter)
}

// ============================================================
// Weighted path packing
// ============================================================

/// Best achievable weight for a fixed vertex sequence: regular edge weights
/// plus the most valuable dangling edges that fit in the remaining edge
/// budget. A one-vertex sequence may use its dangling edge only once.
pub(crate) fn sequence_best_weight(
    g: &WeightedPathGraph,
    seq: &[usize],
    regular_weight: u32,
    edge_budget: u32,
) -> u32 {
    let regular_edges = (seq.len() - 1) as u32;
    let slots = edge_budget.saturating_sub(regular_edges);
    let first = g.dangling_weight(seq[0]);
    let last = if seq.len() > 1 {
        g.dangling_weight(*seq.last().unwrap())
    } else {
        None
    };
    let mut extras = [first.unwrap_or(0), last.unwrap_or(0)];
    extras.sort_unstable();
    let take = slots.min(2) as usize;
    let bonus: u32 = extras.iter().rev().take(take).sum();
    regular_weight + bonus
}

/// All vertex sets of candidate paths (weight ≥ d with at most d edges in
/// total, dangling edges only at the ends), in canonical order.
fn path_candidates(
    g: &WeightedPathGraph,
    d: u32,
    meter: &mut Meter,
) -> OracleResult<(Vec<FixedBitSet>, Vec<usize>)> {
    let adj = g.adjacency();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();

    fn extend(
        g: &WeightedPathGraph,
        adj: &[Vec<usize>],
        d: u32,
        seq: &mut Vec<usize>,
        on_path: &mut FixedBitSet,
        regular_weight: u32,
        found: &mut BTreeSet<Vec<usize>>,
        meter: &mut Meter,
    ) -> OracleResult<()> {
        meter.tick()?;
        if sequence_best_weight(g, seq, regular_weight, d) >= d {
            let mut set = seq.clone();
            set.sort_unstable();
            found.insert(set);
        }
        if (seq.len() - 1) as u32 >= d {
            return Ok(());
        }
        let tail = *seq.last().unwrap();
        for &next in &adj[tail] {
            if on_path.contains(next) {
                continue;
            }
            let w = g.weight(tail, next).expect("adjacency implies edge");
            on_path.insert(next);
            seq.push(next);
            extend(g, adj, d, seq, on_path, regular_weight + w, found, meter)?;
            seq.pop();
            on_path.remove(next);
        }
        Ok(())
    }

    for start in 0..g.n() {
        let mut seq = vec![start];
        let mut on_path = FixedBitSet::with_capacity(g.n());
        on_path.insert(start);
        extend(g, &adj, d, &mut seq, &mut on_path, 0, &mut found, meter)?;
    }
    let sets: Vec<Vec<usize>> = found.into_iter().collect();
    Ok(packing_inputs(g.n(), sets))
}

/// Exact maximum number of vertex-disjoint paths of weight at least `d`.
///
/// A path longer than d edges always contains a prefix of weight ≥ d with at
/// most d edges (weights are ≥ 1, and interior edges are regular), so
/// enumerating short candidates loses no packings.
pub fn max_weighted_path_matching(
    g: &WeightedPathGraph,
    d: u32,
    budget: OracleBudget,
) -> OracleResult<usize> {
    let mut meter = Meter::new(budget);
    let (sets, mins) = path_candidates(g, d, &mut meter)?;
    pack_disjoint(g.n(), &sets, &mins, None, &mut meter)
}

/// Decision form of [`max_weighted_path_matching`].
pub fn weighted_path_matching_at_least(
    g: &WeightedPathGraph,
    d: u32,
    k: usize,
    budget: OracleBudget,
) -> OracleResult<bool> {
    if k == 0 {
        return Ok(true);
    }
    let mut meter = Meter::new(budget);
    let (sets, mins) = path_candidates(g, d, &mut meter)?;
    Ok(pack_disjoint(g.n(), &sets, &mins, Some(k), &mut meter)? >= k)
}

/// Weight of a finished witness sequence. Two-terminal witnesses are
/// regular-only; a one-terminal witness may spend one remaining edge slot on
/// the dangling edge of its far end.
pub(crate) fn witness_weight(
    g: &WeightedPathGraph,
    goal: Option<usize>,
    seq: &[usize],
    regular_weight: u32,
    i: u32,
) -> u32 {
    let mut total = regular_weight;
    if goal.is_none() && seq.len() > 1 && (seq.len() as u32) <= i {
        total += g.dangling_weight(*seq.last().unwrap()).unwrap_or(0);
    }
    total
}

/// True iff some path of weight ≥ `i` with at most `i` edges runs inside
/// `allowed ∪ f`, with endpoints exactly `f` (two terminals) or starting at
/// `f` (one terminal).
///
/// Witness paths never use the dangling edges of the terminals in `f`: a
/// witness gets spliced into a longer path at exactly those vertices, and
/// dangling edges are illegal in a path's interior. The far end of a
/// one-terminal witness stays a genuine path end after splicing, so its
/// dangling edge counts (against the edge budget). The bare dangling edge of
/// a one-vertex request is likewise out of scope: that is the resolved case,
/// checked directly on the weight by every caller.
///
/// Witnesses with more than `i` edges are deliberately out of scope: a
/// segment of weight w always has at most w edges, so any longer witness
/// certifies the request for its own (higher) weight instead.
pub fn exists_path(g: &WeightedPathGraph, allowed: &[usize], f: &[usize], i: u32) -> bool {
    find_witness(g, allowed, f, i).is_some()
}

/// Like [`exists_path`], but returns the witness itself: the first
/// qualifying vertex sequence in depth-first order over ascending neighbor
/// ids, which is the lexicographically least one.
pub fn find_witness(
    g: &WeightedPathGraph,
    allowed: &[usize],
    f: &[usize],
    i: u32,
) -> Option<Vec<usize>> {
    assert!(matches!(f.len(), 1 | 2), "f must have one or two vertices");
    assert!(i >= 1, "requested weight must be positive");
    let x = f[0];
    let goal = if f.len() == 2 {
        assert_ne!(f[0], f[1], "terminals must be distinct");
        Some(f[1])
    } else {
        None
    };
    let mut ok = FixedBitSet::with_capacity(g.n());
    for &v in allowed {
        ok.insert(v);
    }
    let adj = g.adjacency();

    fn dfs(
        g: &WeightedPathGraph,
        adj: &[Vec<usize>],
        ok: &FixedBitSet,
        goal: Option<usize>,
        i: u32,
        seq: &mut Vec<usize>,
        on_path: &mut FixedBitSet,
        regular_weight: u32,
    ) -> bool {
        let tail = *seq.last().unwrap();
        let finished = match goal {
            Some(y) => tail == y,
            None => true,
        };
        if finished && witness_weight(g, goal, seq, regular_weight, i) >= i {
            return true;
        }
        if goal == Some(tail) || (seq.len() - 1) as u32 >= i {
            return false;
        }
        for &next in &adj[tail] {
            if on_path.contains(next) {
                continue;
            }
            let interior_ok = ok.contains(next) || goal == Some(next);
            if !interior_ok {
                continue;
            }
            let w = g.weight(tail, next).expect("adjacency implies edge");
            on_path.insert(next);
            seq.push(next);
            if dfs(g, adj, ok, goal, i, seq, on_path, regular_weight + w) {
                return true;
            }
            seq.pop();
            on_path.remove(next);
        }
        false
    }

    let mut seq = vec![x];
    let mut on_path = FixedBitSet::with_capacity(g.n());
    on_path.insert(x);
    if dfs(g, &adj, &ok, goal, i, &mut seq, &mut on_path, 0) {
        Some(seq)
    } else {
        None
    }
}

// ============================================================
// Vertex cover and clique
// ============================================================

/// Exact minimum vertex cover of a d-uniform hypergraph.
pub fn min_vertex_cover(h: &Hypergraph, budget: OracleBudget) -> OracleResult<usize> {
    let mut meter = Meter::new(budget);
    if h.m() == 0 {
        return Ok(0);
    }
    if h.d() == 2 {
        let g = h.to_simple().expect("d == 2");
        vc_graph(&g, &mut meter)
    } else {
        vc_hyper(h, &mut meter)
    }
}

/// Graph case: branch on a maximum-degree vertex — either it joins the
/// cover, or all of its remaining neighbors must.
fn vc_graph(g: &SimpleGraph, meter: &mut Meter) -> OracleResult<usize> {
    let n = g.n();
    let mut nbr: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); n];
    for &(u, v) in g.edges() {
        nbr[u].insert(v);
        nbr[v].insert(u);
    }

    // Greedy max-degree incumbent.
    let mut best = {
        let mut alive: Vec<FixedBitSet> = nbr.clone();
        let mut cover = 0usize;
        loop {
            let v = (0..n).max_by_key(|&v| alive[v].count_ones(..));
            match v {
                Some(v) if alive[v].count_ones(..) > 0 => {
                    let vs: Vec<usize> = alive[v].ones().collect();
                    for w in vs {
                        alive[w].remove(v);
                    }
                    alive[v].clear();
                    cover += 1;
                }
                _ => break,
            }
        }
        cover
    };

    fn lower_bound(nbr: &[FixedBitSet], active: &FixedBitSet) -> usize {
        // Greedy matching: disjoint edges each force one cover vertex.
        let mut taken = FixedBitSet::with_capacity(nbr.len());
        let mut lb = 0;
        for u in active.ones() {
            if taken.contains(u) {
                continue;
            }
            if let Some(v) = nbr[u]
                .ones()
                .find(|&v| active.contains(v) && !taken.contains(v) && v > u)
            {
                taken.insert(u);
                taken.insert(v);
                lb += 1;
            }
        }
        lb
    }

    fn rec(
        nbr: &[FixedBitSet],
        active: &mut FixedBitSet,
        count: usize,
        best: &mut usize,
        meter: &mut Meter,
    ) -> OracleResult<()> {
        meter.tick()?;
        if count >= *best {
            return Ok(());
        }
        // Pick the active vertex with most active neighbors.
        let mut pick = None;
        let mut maxdeg = 0;
        for v in active.ones() {
            let deg = nbr[v].ones().filter(|&w| active.contains(w)).count();
            if deg > maxdeg {
                maxdeg = deg;
                pick = Some(v);
            }
        }
        let Some(v) = pick else {
            // No edges left.
            *best = count;
            return Ok(());
        };
        if maxdeg == 1 {
            // Remaining edges form a matching; one endpoint each suffices.
            let m = active
                .ones()
                .filter(|&u| nbr[u].ones().any(|w| active.contains(w)))
                .count()
                / 2;
            if count + m < *best {
                *best = count + m;
            }
            return Ok(());
        }
        if count + lower_bound(nbr, active) >= *best {
            return Ok(());
        }
        let vnbrs: Vec<usize> = nbr[v].ones().filter(|&w| active.contains(w)).collect();
        // Take v into the cover.
        active.remove(v);
        rec(nbr, active, count + 1, best, meter)?;
        // Leave v out: every neighbor goes in.
        for &w in &vnbrs {
            active.remove(w);
        }
        rec(nbr, active, count + vnbrs.len(), best, meter)?;
        for &w in &vnbrs {
            active.insert(w);
        }
        active.insert(v);
        Ok(())
    }

    let mut active = FixedBitSet::with_capacity(n);
    for v in 0..n {
        active.insert(v);
    }
    rec(&nbr, &mut active, 0, &mut best, meter)?;
    Ok(best)
}

/// Hypergraph case: branch on the d vertices of the first uncovered edge.
fn vc_hyper(h: &Hypergraph, meter: &mut Meter) -> OracleResult<usize> {
    let n = h.n();
    let sets: Vec<FixedBitSet> = h.edges().iter().map(|e| to_bitset(n, e)).collect();

    fn first_uncovered(sets: &[FixedBitSet], cover: &FixedBitSet) -> Option<usize> {
        sets.iter().position(|s| s.is_disjoint(cover))
    }

    fn lower_bound(sets: &[FixedBitSet], cover: &FixedBitSet) -> usize {
        let mut blocked = cover.clone();
        let mut lb = 0;
        for s in sets {
            if s.is_disjoint(&blocked) {
                blocked.union_with(s);
                lb += 1;
            }
        }
        lb
    }

    fn rec(
        h: &Hypergraph,
        sets: &[FixedBitSet],
        cover: &mut FixedBitSet,
        count: usize,
        best: &mut usize,
        meter: &mut Meter,
    ) -> OracleResult<()> {
        meter.tick()?;
        if count >= *best {
            return Ok(());
        }
        let Some(j) = first_uncovered(sets, cover) else {
            *best = count;
            return Ok(());
        };
        if count + lower_bound(sets, cover) >= *best {
            return Ok(());
        }
        for &v in &h.edges()[j] {
            cover.insert(v);
            rec(h, sets, cover, count + 1, best, meter)?;
            cover.remove(v);
        }
        Ok(())
    }

    // Greedy incumbent: cover the first uncovered edge entirely.
    let mut best = {
        let mut cover = FixedBitSet::with_capacity(n);
        let mut count = 0;
        while let Some(j) = first_uncovered(&sets, &cover) {
            for &v in &h.edges()[j] {
                if !cover.contains(v) {
                    cover.insert(v);
                    count += 1;
                }
            }
        }
        count
    };
    let mut cover = FixedBitSet::with_capacity(n);
    rec(h, &sets, &mut cover, 0, &mut best, meter)?;
    Ok(best)
}

/// Exact maximum clique: the largest vertex set all of whose size-d subsets
/// are edges. Any set with fewer than d vertices is vacuously a clique.
pub fn max_clique(h: &Hypergraph, budget: OracleBudget) -> OracleResult<usize> {
    let mut meter = Meter::new(budget);
    if h.d() == 2 {
        let g = h.to_simple().expect("d == 2");
        clique_graph(&g, &mut meter)
    } else {
        clique_hyper(h, &mut meter)
    }
}

/// Graph clique via branch and bound with a greedy-coloring upper bound.
fn clique_graph(g: &SimpleGraph, meter: &mut Meter) -> OracleResult<usize> {
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    let mut nbr: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); n];
    for &(u, v) in g.edges() {
        nbr[u].insert(v);
        nbr[v].insert(u);
    }

    fn color_bound(nbr: &[FixedBitSet], cand: &[usize]) -> usize {
        // Sequential greedy coloring; chromatic count bounds the clique.
        let mut colors: Vec<FixedBitSet> = Vec::new();
        for &v in cand {
            match colors.iter_mut().find(|class| class.is_disjoint(&nbr[v])) {
                Some(class) => class.insert(v),
                None => {
                    let mut class = FixedBitSet::with_capacity(nbr.len());
                    class.insert(v);
                    colors.push(class);
                }
            }
        }
        colors.len()
    }

    fn rec(
        nbr: &[FixedBitSet],
        cand: &[usize],
        size: usize,
        best: &mut usize,
        meter: &mut Meter,
    ) -> OracleResult<()> {
        meter.tick()?;
        if size > *best {
            *best = size;
        }
        if cand.is_empty() || size + cand.len() <= *best {
            return Ok(());
        }
        if size + color_bound(nbr, cand) <= *best {
            return Ok(());
        }
        for (pos, &v) in cand.iter().enumerate() {
            if size + (cand.len() - pos) <= *best {
                break;
            }
            let rest: Vec<usize> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|&w| nbr[v].contains(w))
                .collect();
            rec(nbr, &rest, size + 1, best, meter)?;
        }
        Ok(())
    }

    let mut best = 0;
    let cand: Vec<usize> = (0..n).collect();
    rec(&nbr, &cand, 0, &mut best, meter)?;
    Ok(best)
}

fn clique_hyper(h: &Hypergraph, meter: &mut Meter) -> OracleResult<usize> {
    fn compatible(h: &Hypergraph, s: &[usize], v: usize) -> bool {
        let d = h.d();
        if s.len() + 1 < d {
            return true;
        }
        // Every (d-1)-subset of s, together with v, must be an edge.
        let mut idx: Vec<usize> = (0..d - 1).collect();
        loop {
            let mut edge: Vec<usize> = idx.iter().map(|&i| s[i]).collect();
            edge.push(v);
            if !h.has_edge(&edge) {
                return false;
            }
            if !advance_subset(&mut idx, s.len()) {
                return true;
            }
        }
    }

    fn rec(
        h: &Hypergraph,
        s: &mut Vec<usize>,
        cand: &[usize],
        best: &mut usize,
        meter: &mut Meter,
    ) -> OracleResult<()> {
        meter.tick()?;
        if s.len() > *best {
            *best = s.len();
        }
        if s.len() + cand.len() <= *best {
            return Ok(());
        }
        for (pos, &v) in cand.iter().enumerate() {
            if s.len() + (cand.len() - pos) <= *best {
                break;
            }
            s.push(v);
            let rest: Vec<usize> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|&w| compatible(h, s, w))
                .collect();
            rec(h, s, &rest, best, meter)?;
            s.pop();
        }
        Ok(())
    }

    let mut best = 0;
    let mut s = Vec::new();
    let cand: Vec<usize> = (0..h.n()).collect();
    rec(h, &mut s, &cand, &mut best, meter)?;
    Ok(best)
}

// ============================================================
// Multicolored biclique and 3-SAT
// ============================================================

/// True iff one vertex can be chosen from each U-block and each W-block so
/// that every chosen U–W pair is an edge.
pub fn has_multicolored_biclique(
    b: &SimpleGraph,
    side_u: &[Vec<usize>],
    side_w: &[Vec<usize>],
) -> bool {
    assert_eq!(side_u.len(), side_w.len(), "both sides need k blocks");
    let n = b.n();
    let mut nbr: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); n];
    for &(u, v) in b.edges() {
        nbr[u].insert(v);
        nbr[v].insert(u);
    }

    fn choose_u(
        nbr: &[FixedBitSet],
        side_u: &[Vec<usize>],
        side_w: &[Vec<usize>],
        block: usize,
        common: &FixedBitSet,
    ) -> bool {
        if block == side_u.len() {
            return side_w
                .iter()
                .all(|wb| wb.iter().any(|&w| common.contains(w)));
        }
        for &u in &side_u[block] {
            let mut next = common.clone();
            next.intersect_with(&nbr[u]);
            // Every W-block must stay inhabited.
            if side_w
                .iter()
                .all(|wb| wb.iter().any(|&w| next.contains(w)))
                && choose_u(nbr, side_u, side_w, block + 1, &next)
            {
                return true;
            }
        }
        false
    }

    let mut all = FixedBitSet::with_capacity(n);
    for v in 0..n {
        all.insert(v);
    }
    choose_u(&nbr, side_u, side_w, 0, &all)
}

/// Exhaustive satisfiability for formulas with at most 20 variables.
pub fn sat3(f: &CnfFormula) -> OracleResult<bool> {
    let nvars = f.nvars();
    if nvars > 20 {
        return Err(OracleError::TooLarge(format!(
            "{nvars} variables, exhaustive search supports at most 20"
        )));
    }
    // Bit i of an assignment mask is the value of variable i+1.
    let mut pos = Vec::with_capacity(f.clauses().len());
    let mut neg = Vec::with_capacity(f.clauses().len());
    for clause in f.clauses() {
        let mut p = 0u32;
        let mut ng = 0u32;
        for &lit in clause {
            let bit = 1u32 << (lit.unsigned_abs() - 1);
            if lit > 0 {
                p |= bit;
            } else {
                ng |= bit;
            }
        }
        pos.push(p);
        neg.push(ng);
    }
    for assign in 0u64..(1u64 << nvars) {
        let a = assign as u32;
        if pos.iter().zip(&neg).all(|(&p, &ng)| (p & a) != 0 || (ng & !a) != 0) {
            return Ok(true);
        }
    }
    Ok(false)
}
