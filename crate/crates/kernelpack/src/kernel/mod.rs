//! Provable data-reduction routines.
//!
//! Every kernelizer here returns a [`KernelOutput`](crate::trace::KernelOutput):
//! a smaller instance with the same answer, a vertex map back to the input,
//! and a trace that justifies each deletion. Deletions are only performed
//! when a locally checkable witness (a sunflower, a degree bound, a good
//! vertex, an unmarked component) proves the answer unchanged.

pub mod p3;
pub mod pd;
pub mod star;
pub mod sunflower;

use std::collections::BTreeSet;

use crate::graph::SimpleGraph;
use crate::trace::SizeSnapshot;

/// Mutable adjacency-set view used by the edge-deleting kernelizers.
pub(crate) fn adjacency_sets(g: &SimpleGraph) -> Vec<BTreeSet<usize>> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.n()];
    for &(u, v) in g.edges() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    adj
}

pub(crate) fn graph_of(adj: &[BTreeSet<usize>]) -> SimpleGraph {
    let mut edges = Vec::new();
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs.iter().filter(|&&v| v > u) {
            edges.push((u, v));
        }
    }
    SimpleGraph::new(adj.len(), edges).expect("adjacency sets are a valid graph")
}

pub(crate) fn snapshot_of(adj: &[BTreeSet<usize>]) -> SizeSnapshot {
    let m: usize = adj.iter().map(|a| a.len()).sum::<usize>() / 2;
    SizeSnapshot::new(adj.len(), m)
}
