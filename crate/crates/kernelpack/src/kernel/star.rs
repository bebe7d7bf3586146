//! Quadratic-size kernel for packing k vertex-disjoint stars with d leaves.
//!
//! Two reductions suffice: a vertex of degree ≥ dk+1 keeps enough neighbors
//! to host a star no matter what k disjoint stars elsewhere consume, so one
//! of its edges can be dropped; and an edge on which no star can stand
//! (neither endpoint reaches degree d) is dead weight. After both, a greedy
//! maximal star matching either already proves YES, or its at most
//! (k−1)(d+1) vertices dominate every remaining edge, bounding the kernel
//! at d³k² edges.

use serde_json::json;

use super::{adjacency_sets, graph_of, snapshot_of};
use crate::graph::SimpleGraph;
use crate::trace::{KernelOutput, KernelTrace, SizeSnapshot, Verdict};

/// Greedy maximal star packing: centers in increasing id, each claiming its
/// d lowest-numbered free neighbors. Returns the stars as (center, leaves).
pub fn greedy_star_matching(g: &SimpleGraph, d: usize) -> Vec<(usize, Vec<usize>)> {
    let adj = g.adjacency();
    let mut free = vec![true; g.n()];
    let mut stars = Vec::new();
    for c in 0..g.n() {
        if !free[c] {
            continue;
        }
        let leaves: Vec<usize> = adj[c].iter().copied().filter(|&v| free[v]).take(d).collect();
        if leaves.len() == d {
            free[c] = false;
            for &v in &leaves {
                free[v] = false;
            }
            stars.push((c, leaves));
        }
    }
    stars
}

/// Kernel for "are there k vertex-disjoint stars with d leaves".
///
/// Either ends with a YES verdict and a constant-size witness subgraph
/// (k disjoint stars found greedily), or with an open kernel of at most
/// d³k² edges and maximum degree ≤ dk. The output is always a subgraph of
/// the input under `vertex_map`.
pub fn kernelize_star_matching(g: &SimpleGraph, d: usize, k: usize) -> KernelOutput<SimpleGraph> {
    assert!(d >= 2, "stars need at least two leaves");
    assert!(k >= 1, "parameter k must be positive");
    let n = g.n();
    let mut adj = adjacency_sets(g);
    let mut trace = KernelTrace::new();

    // Degree trimming: a vertex of degree ≥ dk+1 can spare an edge.
    loop {
        let Some(v) = (0..n).find(|&v| adj[v].len() >= d * k + 1) else {
            break;
        };
        let u = *adj[v].iter().next().expect("degree ≥ 1");
        let before = snapshot_of(&adj);
        adj[v].remove(&u);
        adj[u].remove(&v);
        trace.record(
            "trim-high-degree",
            json!({ "vertex": v, "removed_edge": [v.min(u), v.max(u)] }),
            before,
            snapshot_of(&adj),
        );
    }
    debug_assert!((0..n).all(|v| adj[v].len() <= d * k));

    // Dead-edge pruning to a fixpoint: an edge can host a star only if one
    // endpoint has degree ≥ d.
    loop {
        let mut doomed = Vec::new();
        for u in 0..n {
            for &v in adj[u].iter().filter(|&&v| v > u) {
                if adj[u].len() < d && adj[v].len() < d {
                    doomed.push((u, v));
                }
            }
        }
        if doomed.is_empty() {
            break;
        }
        let before = snapshot_of(&adj);
        for &(u, v) in &doomed {
            adj[u].remove(&v);
            adj[v].remove(&u);
        }
        trace.record(
            "prune-starless",
            json!({ "removed_edges": doomed.len() }),
            before,
            snapshot_of(&adj),
        );
    }

    let reduced = graph_of(&adj);
    let stars = greedy_star_matching(&reduced, d);
    if stars.len() >= k {
        // k disjoint stars certify YES; the witness subgraph is the kernel.
        let mut keep: Vec<usize> = stars[..k]
            .iter()
            .flat_map(|(c, leaves)| std::iter::once(*c).chain(leaves.iter().copied()))
            .collect();
        keep.sort_unstable();
        let before = SizeSnapshot::new(reduced.n(), reduced.m());
        let (witness, vertex_map) = reduced.induced(&keep);
        trace.record(
            "yes-certificate",
            json!({
                "stars": stars[..k]
                    .iter()
                    .map(|(c, leaves)| json!({ "center": c, "leaves": leaves }))
                    .collect::<Vec<_>>(),
            }),
            before,
            SizeSnapshot::new(witness.n(), witness.m()),
        );
        trace.verdict = Verdict::Yes;
        return KernelOutput {
            graph: witness,
            vertex_map,
            trace,
        };
    }

    let before = SizeSnapshot::new(reduced.n(), reduced.m());
    let keep: Vec<usize> = (0..n).filter(|&v| !adj[v].is_empty()).collect();
    let (kernel, vertex_map) = reduced.induced(&keep);
    if kernel.n() != reduced.n() {
        trace.record(
            "drop-isolated-vertices",
            json!({ "removed": reduced.n() - kernel.n() }),
            before,
            SizeSnapshot::new(kernel.n(), kernel.m()),
        );
    }
    assert!(
        kernel.m() <= d.pow(3) * k * k,
        "kernel exceeds its guaranteed size"
    );
    KernelOutput {
        graph: kernel,
        vertex_map,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HPattern;
    use crate::oracle::{h_matching_at_least, OracleBudget};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_big_star_certifies_yes() {
        let g = SimpleGraph::new(11, (1..=10).map(|i| (0, i)).collect()).unwrap();
        let out = kernelize_star_matching(&g, 3, 1);
        assert_eq!(out.trace.verdict, Verdict::Yes);
        assert!(
            h_matching_at_least(&out.graph, &HPattern::star(3), 1, OracleBudget::default())
                .unwrap()
        );
        assert_eq!(out.graph.n(), 4);
    }

    #[test]
    fn triangles_without_stars_vanish() {
        let g = SimpleGraph::new(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let out = kernelize_star_matching(&g, 3, 1);
        assert_eq!(out.trace.verdict, Verdict::Open);
        assert_eq!(out.graph.m(), 0);
        assert!(
            !h_matching_at_least(&g, &HPattern::star(3), 1, OracleBudget::default()).unwrap()
        );
    }

    #[test]
    fn answer_preserved_and_size_bounded_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        for _ in 0..150 {
            let n = rng.gen_range(2..=14);
            let d = rng.gen_range(2..=3);
            let k = rng.gen_range(1..=3);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let g = SimpleGraph::new(n, edges).unwrap();
            let out = kernelize_star_matching(&g, d, k);
            let pattern = HPattern::star(d);
            let input_answer =
                h_matching_at_least(&g, &pattern, k, OracleBudget::default()).unwrap();
            let output_answer =
                h_matching_at_least(&out.graph, &pattern, k, OracleBudget::default()).unwrap();
            assert_eq!(input_answer, output_answer, "instance: {g:?}, d={d}, k={k}");
            if out.trace.verdict == Verdict::Open {
                assert!(out.graph.m() <= d.pow(3) as usize * k * k);
                let degs = out.graph.degrees();
                assert!(degs.iter().all(|&x| x <= d * k));
            }
            // Subgraph property through the vertex map.
            for &(u, v) in out.graph.edges() {
                assert!(g.has_edge(out.vertex_map[u], out.vertex_map[v]));
            }
        }
    }
}
