//! Sunflower detection and the polynomial kernel for disjoint-set matching.
//!
//! A sunflower is a family of hyperedges whose pairwise intersections all
//! equal one common core. If a d-uniform hypergraph has more than d!·r^d
//! edges it contains a sunflower with r+1 petals, and the greedy argument
//! below finds one. With r = d·k, a matching of size k touches at most dk
//! vertices and therefore misses at least one of dk+1 petals, so deleting
//! any single petal of such a sunflower preserves whether k disjoint edges
//! exist. Repeating until the edge count drops to d!·(dk)^d yields a kernel
//! whose size depends only on d and k.

use serde_json::json;

use crate::graph::Hypergraph;
use crate::trace::{KernelOutput, KernelTrace, SizeSnapshot};

/// Edges whose pairwise intersections all equal `core`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sunflower {
    pub core: Vec<usize>,
    pub petals: Vec<Vec<usize>>,
}

impl Sunflower {
    /// Checks the defining property directly: at least two petals, and every
    /// pair of petals intersects in exactly the core.
    pub fn verify(&self) -> bool {
        if self.petals.len() < 2 {
            return false;
        }
        for (i, a) in self.petals.iter().enumerate() {
            if !self.core.iter().all(|v| a.contains(v)) {
                return false;
            }
            for b in &self.petals[i + 1..] {
                let mut meet: Vec<usize> =
                    a.iter().copied().filter(|v| b.contains(v)).collect();
                meet.sort_unstable();
                if meet != self.core {
                    return false;
                }
            }
        }
        true
    }
}

/// Greedy sunflower search: returns a sunflower with at least `petals`
/// petals whenever the edge count exceeds d!·(petals−1)^d, and possibly for
/// smaller inputs too.
///
/// Strategy: a maximal pairwise-disjoint edge family is itself a sunflower
/// with empty core; if it is too small, its at most (petals−1)·d vertices
/// meet every edge, so some vertex is frequent — recurse on the edges
/// containing the most frequent vertex, with that vertex removed, and put
/// it back into the core afterwards.
pub fn find_sunflower(h: &Hypergraph, petals: usize) -> Option<Sunflower> {
    assert!(petals >= 2, "a sunflower needs at least two petals");
    // Work on (current vertex set, original edge) pairs so cores can be
    // stripped during recursion and petals reported as input edges.
    let edges: Vec<(Vec<usize>, usize)> = (0..h.m()).map(|j| (h.edges()[j].clone(), j)).collect();
    let (core, petal_ids) = search(&edges, petals)?;
    let mut core = core;
    core.sort_unstable();
    Some(Sunflower {
        core,
        petals: petal_ids.iter().map(|&j| h.edges()[j].clone()).collect(),
    })
}

fn search(edges: &[(Vec<usize>, usize)], petals: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    // Greedy maximal disjoint family, in the canonical edge order.
    let mut family: Vec<usize> = Vec::new();
    let mut covered: Vec<usize> = Vec::new();
    for (i, (e, _)) in edges.iter().enumerate() {
        if e.iter().all(|v| !covered.contains(v)) {
            family.push(i);
            covered.extend(e.iter().copied());
        }
    }
    if family.len() >= petals {
        return Some((
            Vec::new(),
            family.iter().map(|&i| edges[i].1).collect(),
        ));
    }
    // Recurse on the most frequent vertex (lowest id on ties). Every edge
    // meets `covered`, so the winner appears in at least m/((petals−1)·d)
    // edges, enough for the counting argument to go through.
    let mut freq: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for (e, _) in edges {
        for &v in e {
            *freq.entry(v).or_insert(0) += 1;
        }
    }
    let (&v, &count) = freq.iter().max_by_key(|&(&v, &c)| (c, std::cmp::Reverse(v)))?;
    if count < 2 || edges[0].0.len() == 1 {
        return None;
    }
    let link: Vec<(Vec<usize>, usize)> = edges
        .iter()
        .filter(|(e, _)| e.contains(&v))
        .map(|(e, j)| (e.iter().copied().filter(|&u| u != v).collect(), *j))
        .collect();
    let (mut core, petal_ids) = search(&link, petals)?;
    core.push(v);
    Some((core, petal_ids))
}

/// Edge threshold below which no further sunflower deletion is guaranteed.
pub fn edge_threshold(d: usize, k: usize) -> u128 {
    let mut t: u128 = 1;
    for i in 1..=d {
        t = t.saturating_mul(i as u128);
    }
    let r = (d as u128).saturating_mul(k as u128);
    for _ in 0..d {
        t = t.saturating_mul(r);
    }
    t
}

/// Kernel for "are there k pairwise-disjoint hyperedges": repeatedly finds
/// a sunflower with dk+1 petals and deletes its lexicographically largest
/// petal, until at most d!·(dk)^d edges remain; then drops isolated
/// vertices. The answer at parameter k is preserved exactly.
pub fn kernelize_set_matching(h: &Hypergraph, k: usize) -> KernelOutput<Hypergraph> {
    assert!(k >= 1, "parameter k must be positive");
    let d = h.d();
    let threshold = edge_threshold(d, k);
    let mut trace = KernelTrace::new();
    let mut current = h.clone();

    while current.m() as u128 > threshold {
        let Some(sunflower) = find_sunflower(&current, d * k + 1) else {
            // Unreachable above the threshold; recorded rather than trusted.
            trace.flag("sunflower-not-found");
            break;
        };
        debug_assert!(sunflower.verify());
        let removed = sunflower
            .petals
            .iter()
            .max()
            .expect("at least two petals")
            .clone();
        let before = SizeSnapshot::new(current.n(), current.m());
        let remaining: Vec<Vec<usize>> = current
            .edges()
            .iter()
            .filter(|e| **e != removed)
            .cloned()
            .collect();
        current = Hypergraph::new(d, current.n(), remaining).expect("subset of valid edges");
        trace.record(
            "delete-petal",
            json!({
                "core": sunflower.core,
                "petal_count": sunflower.petals.len(),
                "removed_edge": removed,
            }),
            before,
            SizeSnapshot::new(current.n(), current.m()),
        );
    }
    assert!(
        current.m() as u128 <= threshold || trace.has_flag("sunflower-not-found"),
        "kernel exceeds its guaranteed size"
    );

    let before = SizeSnapshot::new(current.n(), current.m());
    let (cleaned, vertex_map) = current.drop_isolated();
    if cleaned.n() != current.n() {
        trace.record(
            "drop-isolated-vertices",
            json!({ "removed": current.n() - cleaned.n() }),
            before,
            SizeSnapshot::new(cleaned.n(), cleaned.m()),
        );
    }
    KernelOutput {
        graph: cleaned,
        vertex_map,
        trace,
    }
}
