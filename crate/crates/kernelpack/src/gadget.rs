//! Coordination gadgets for matching and factor instances.
//!
//! A *selector* is a d-partite d-uniform hypergraph that shares m disjoint
//! blocks of external vertices with a host instance. Deleting exactly one
//! whole block leaves a unique perfect matching on the rest of the gadget;
//! deleting any other subset of the shared vertices leaves none. Wired into
//! a disjoint union of instances, a selector forces every perfect matching
//! of the union to live inside a single instance — it turns a union into an
//! OR.
//!
//! A *hyperedge gadget* plays the same role one level down: it simulates a
//! single d-ary hyperedge inside an H-factor instance. Its d terminals are
//! either all covered by the gadget or all left to the host, so the gadget
//! behaves like one hyperedge that is either picked or not.
//!
//! [`naive_packing_structure`] supplies the trivial carrier for factor
//! compositions: disjoint cliques, which are their own packing certificate.

use crate::graph::{GraphError, HPattern, Hypergraph, PartitionedHypergraph, SimpleGraph};

/// A selector: a partite hypergraph together with the external blocks it
/// coordinates and the private vertices it owns outright.
///
/// Blocks are pairwise disjoint independent sets, all in class 0; private
/// vertices are every vertex outside the blocks. Vertex ids are local to the
/// gadget — callers embed them into a host instance by renumbering.
#[derive(Debug, Clone)]
pub struct SelectorGadget {
    pub graph: PartitionedHypergraph,
    pub blocks: Vec<Vec<usize>>,
    pub private_vertices: Vec<usize>,
}

/// A simulated hyperedge: a graph whose `terminals` form an independent set
/// and an H-factor exists exactly when all or none of the terminals are
/// removed.
#[derive(Debug, Clone)]
pub struct HyperedgeGadget {
    pub graph: SimpleGraph,
    pub terminals: Vec<usize>,
}

/// Builds the two-block selector: a cyclic band of `2s` hyperedges that can
/// release block 1 or block 2 but nothing in between.
///
/// Layout: blocks `U_1 = [0, s)` and `U_2 = [s, 2s)`, then s joint vertices,
/// then s bands of `d - 2` vertices. Edge `2r+1` is `{U_1[r], joint r,
/// band r}`; edge `2r+2` is `{U_2[r], joint r, band (r+1) mod s}`. Odd edges
/// use band r "behind" the joint and even edges use the band "ahead", so
/// picking an odd edge anywhere forces odd edges everywhere around the
/// cycle, and likewise for even.
///
/// Panics when `d < 3` or `s < 2`; a flat or thin switch has no room for
/// the bands that make the choice global.
pub fn build_switch_gadget(d: usize, s: usize) -> SelectorGadget {
    build_selector_gadget(d, 2, s)
}

/// Builds the m-block selector as a chain of `m - 1` switches, switch r
/// joining blocks r and r+1 with fresh private vertices.
///
/// Deleting block i resolves every switch: switches left of i release their
/// left block, switches right of i release their right block, and each does
/// so with a unique perfect matching. Deleting anything else strands a
/// vertex somewhere in the chain.
///
/// Panics when `d < 3`, `m < 2` or `s < 2`.
pub fn build_selector_gadget(d: usize, m: usize, s: usize) -> SelectorGadget {
    assert!(d >= 3, "selector arity must be at least 3, got {d}");
    assert!(m >= 2, "a selector needs at least 2 blocks, got {m}");
    assert!(s >= 2, "selector blocks must hold at least 2 vertices, got {s}");

    let blocks: Vec<Vec<usize>> = (0..m).map(|i| (i * s..(i + 1) * s).collect()).collect();
    let base = m * s;
    let per_switch = s * (d - 1); // s joints + s bands of d - 2
    let n = base + (m - 1) * per_switch;

    let mut color = vec![0; n];
    let mut edges = Vec::with_capacity((m - 1) * 2 * s);
    for r in 0..m - 1 {
        let joints = base + r * per_switch;
        let bands = joints + s;
        let band = |q: usize| -> Vec<usize> { (0..d - 2).map(|i| bands + q * (d - 2) + i).collect() };
        for q in 0..s {
            color[joints + q] = 1;
            for (i, v) in band(q).into_iter().enumerate() {
                color[v] = 2 + i;
            }
        }
        for q in 0..s {
            let mut odd = vec![blocks[r][q], joints + q];
            odd.extend(band(q));
            let mut even = vec![blocks[r + 1][q], joints + q];
            even.extend(band((q + 1) % s));
            edges.push(odd);
            edges.push(even);
        }
    }

    let graph = Hypergraph::new(d, n, edges).expect("selector edges are valid");
    let graph = PartitionedHypergraph::new(graph, color).expect("selector layout is d-partite");
    SelectorGadget {
        graph,
        blocks,
        private_vertices: (base..n).collect(),
    }
}

/// Builds the gadget simulating one hyperedge over `d = |V(h)|` terminals.
///
/// A central copy of the pattern sits in the middle; each central vertex u
/// owns an outer copy whose anchor is exposed as terminal u, and u is wired
/// to that copy exactly as its anchor is. Removing no terminal leaves d + 1
/// disjoint copies; removing all of them lets each central vertex stand in
/// for its copy's anchor. Removing anything in between breaks divisibility:
/// the gadget has `d(d + 1)` vertices, so only multiples of d can go.
///
/// Panics when the pattern is disconnected or has fewer than 3 vertices.
pub fn build_hyperedge_gadget(h: &HPattern) -> HyperedgeGadget {
    assert!(h.is_connected(), "the pattern must be connected");
    let d = h.vertex_count();
    assert!(d >= 3, "the pattern must have at least 3 vertices, got {d}");

    let anchor = h.anchor();
    let copy = |u: usize, w: usize| d + u * d + w;
    let mut edges: Vec<(usize, usize)> = h.graph().edges().to_vec();
    for u in 0..d {
        for &(x, y) in h.graph().edges() {
            edges.push((copy(u, x), copy(u, y)));
        }
        for w in 0..d {
            if h.graph().has_edge(anchor, w) {
                edges.push((u, copy(u, w)));
            }
        }
    }
    let graph = SimpleGraph::new(d * (d + 1), edges).expect("gadget edges are valid");
    let terminals = (0..d).map(|u| copy(u, anchor)).collect();
    HyperedgeGadget { graph, terminals }
}

/// The disjoint union of `t` copies of K_p, with the cliques listed.
///
/// This is the simplest graph with the two properties factor compositions
/// lean on: the listed cliques pairwise share nothing, and every p-clique
/// of the graph is one of them.
pub fn naive_packing_structure(p: usize, t: usize) -> Result<(SimpleGraph, Vec<Vec<usize>>), GraphError> {
    if p < 2 {
        return Err(GraphError::EmptyPattern);
    }
    let cliques: Vec<Vec<usize>> = (0..t).map(|i| (i * p..(i + 1) * p).collect()).collect();
    let mut edges = Vec::with_capacity(t * p * (p - 1) / 2);
    for k in &cliques {
        for a in 0..p {
            for b in a + 1..p {
                edges.push((k[a], k[b]));
            }
        }
    }
    let graph = SimpleGraph::new(p * t, edges)?;
    Ok((graph, cliques))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{count_perfect_matchings, has_h_factor, has_perfect_matching, OracleBudget};

    fn budget() -> OracleBudget {
        OracleBudget::default()
    }

    /// The gadget graph with the vertices of `removed` deleted.
    fn without(g: &Hypergraph, removed: &[usize]) -> Hypergraph {
        let keep: Vec<usize> = (0..g.n()).filter(|v| !removed.contains(v)).collect();
        g.induced(&keep).0
    }

    /// All subsets of `pool`, as vertex lists.
    fn subsets(pool: &[usize]) -> Vec<Vec<usize>> {
        (0..1u32 << pool.len())
            .map(|mask| {
                pool.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn switch_matches_the_pinned_shape() {
        let s = build_switch_gadget(3, 2);
        assert_eq!(s.graph.graph().n(), 8);
        assert_eq!(s.graph.graph().m(), 4);
        assert_eq!(s.blocks, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(s.private_vertices, vec![4, 5, 6, 7]);
        let classes = s.graph.classes();
        assert_eq!(classes[0], vec![0, 1, 2, 3]);
        assert_eq!(classes[1], vec![4, 5]);
        assert_eq!(classes[2], vec![6, 7]);
    }

    #[test]
    fn switch_releases_one_block_through_a_unique_matching() {
        let s = build_switch_gadget(3, 2);
        for block in &s.blocks {
            let rest = without(s.graph.graph(), block);
            assert_eq!(count_perfect_matchings(&rest, budget()).unwrap(), 1);
        }
        // Deleting block 1 kills every edge through it; what survives is the
        // other parity class of the cycle, and it is itself the matching.
        let rest = without(s.graph.graph(), &s.blocks[0]);
        assert_eq!(rest.m(), 2);
    }

    #[test]
    fn switch_rejects_every_improper_removal() {
        let s = build_switch_gadget(3, 2);
        let pool: Vec<usize> = s.blocks.concat();
        for b in subsets(&pool) {
            let proper = s.blocks.iter().any(|u| *u == b);
            let rest = without(s.graph.graph(), &b);
            assert_eq!(
                has_perfect_matching(&rest, budget()).unwrap(),
                proper,
                "removing {b:?} should {}leave a perfect matching",
                if proper { "" } else { "not " },
            );
        }
    }

    #[test]
    fn switch_is_partite_at_higher_arity() {
        let s = build_switch_gadget(4, 2);
        assert_eq!(s.graph.graph().n(), 10);
        let classes = s.graph.classes();
        assert_eq!(classes.iter().map(Vec::len).collect::<Vec<_>>(), [4, 2, 2, 2]);
        // Partitioned construction already forbids clashes; check each edge
        // really spans all classes.
        for e in s.graph.graph().edges() {
            let mut seen: Vec<usize> = e.iter().map(|&v| s.graph.color(v)).collect();
            seen.sort_unstable();
            assert_eq!(seen, [0, 1, 2, 3]);
        }
    }

    #[test]
    fn selector_collapses_to_the_switch_at_two_blocks() {
        let sel = build_selector_gadget(3, 2, 2);
        let sw = build_switch_gadget(3, 2);
        assert_eq!(sel.graph, sw.graph);
        assert_eq!(sel.blocks, sw.blocks);
    }

    #[test]
    fn selector_keeps_exactly_one_block() {
        for d in [3, 4] {
            for m in [2, 3] {
                let s = 2;
                let sel = build_selector_gadget(d, m, s);
                let pool: Vec<usize> = sel.blocks.concat();
                for b in subsets(&pool) {
                    let rest = without(sel.graph.graph(), &b);
                    let count = count_perfect_matchings(&rest, budget()).unwrap();
                    if sel.blocks.iter().any(|u| *u == b) {
                        assert_eq!(count, 1, "d={d} m={m}: block {b:?} must release uniquely");
                    } else {
                        assert_eq!(count, 0, "d={d} m={m}: {b:?} must strand a vertex");
                    }
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "arity must be at least 3")]
    fn selector_rejects_flat_arity() {
        build_selector_gadget(2, 2, 2);
    }

    #[test]
    #[should_panic(expected = "at least 2 blocks")]
    fn selector_rejects_a_single_block() {
        build_selector_gadget(3, 1, 2);
    }

    #[test]
    #[should_panic(expected = "at least 2 vertices")]
    fn selector_rejects_thin_blocks() {
        build_switch_gadget(3, 1);
    }

    #[test]
    fn hyperedge_gadget_matches_the_pinned_shapes() {
        let g3 = build_hyperedge_gadget(&HPattern::clique(3));
        assert_eq!(g3.graph.n(), 12);
        assert_eq!(g3.terminals, vec![3, 6, 9]);
        let g4 = build_hyperedge_gadget(&HPattern::path(3));
        assert_eq!(g4.graph.n(), 20);
        assert_eq!(g4.terminals, vec![4, 8, 12, 16]);
        for gadget in [&g3, &g4] {
            for &a in &gadget.terminals {
                for &b in &gadget.terminals {
                    assert!(a == b || !gadget.graph.has_edge(a, b), "terminals stay independent");
                }
            }
        }
    }

    #[test]
    fn hyperedge_gadget_frees_all_or_none() {
        for h in [HPattern::clique(3), HPattern::path(3), HPattern::star(3)] {
            let gadget = build_hyperedge_gadget(&h);
            let d = h.vertex_count();
            for s in subsets(&gadget.terminals) {
                let keep: Vec<usize> =
                    (0..gadget.graph.n()).filter(|v| !s.contains(v)).collect();
                let (rest, _) = gadget.graph.induced(&keep);
                let expected = s.is_empty() || s.len() == d;
                assert_eq!(
                    has_h_factor(&rest, &h, budget()).unwrap(),
                    expected,
                    "removing {} of {d} terminals",
                    s.len(),
                );
            }
        }
    }

    #[test]
    #[should_panic(expected = "must be connected")]
    fn hyperedge_gadget_rejects_split_patterns() {
        let two_edges = SimpleGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        build_hyperedge_gadget(&HPattern::new(two_edges).unwrap());
    }

    #[test]
    #[should_panic(expected = "at least 3 vertices")]
    fn hyperedge_gadget_rejects_tiny_patterns() {
        build_hyperedge_gadget(&HPattern::path(1));
    }

    #[test]
    fn packing_structure_is_disjoint_cliques() {
        let (g, cliques) = naive_packing_structure(3, 4).unwrap();
        assert_eq!((g.n(), g.m(), cliques.len()), (12, 12, 4));
        let mut triangles = Vec::new();
        for a in 0..g.n() {
            for b in a + 1..g.n() {
                for c in b + 1..g.n() {
                    if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                        triangles.push(vec![a, b, c]);
                    }
                }
            }
        }
        assert_eq!(triangles, cliques);
    }

    #[test]
    fn packing_structure_has_no_stray_cliques() {
        let (g, cliques) = naive_packing_structure(4, 2).unwrap();
        let all: Vec<usize> = (0..g.n()).collect();
        let found: Vec<Vec<usize>> = subsets(&all)
            .into_iter()
            .filter(|s| {
                s.len() == 4
                    && s.iter()
                        .all(|&a| s.iter().all(|&b| a == b || g.has_edge(a, b)))
            })
            .collect();
        assert_eq!(found, cliques);
    }

    #[test]
    fn packing_structure_is_partite_by_residue() {
        let (g, cliques) = naive_packing_structure(3, 4).unwrap();
        for (a, b) in g.edges() {
            assert_ne!(a % 3, b % 3);
        }
        for k in &cliques {
            let mut residues: Vec<usize> = k.iter().map(|v| v % 3).collect();
            residues.sort_unstable();
            assert_eq!(residues, [0, 1, 2]);
        }
    }
}
