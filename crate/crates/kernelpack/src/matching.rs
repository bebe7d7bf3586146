//! Minimum-weight bipartite matching with a fixed cardinality, by
//! successive shortest augmenting paths.
//!
//! Each augmentation adds the cheapest possible alternating path, so after
//! c rounds the matching is a minimum-weight matching among all matchings
//! of cardinality c. Residual costs can be negative on reversed edges, so
//! paths are found with Bellman–Ford; instances here are small enough that
//! potentials would be overkill.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteMatching {
    pub weight: u64,
    /// (left, right) pairs in increasing left order.
    pub pairs: Vec<(usize, usize)>,
}

/// Minimum total weight over all matchings with exactly `size` edges in the
/// bipartite graph given by `edges = (left, right, weight)`; `None` when no
/// matching of that cardinality exists. Deterministic for a fixed edge
/// order.
pub fn min_weight_matching_of_size(
    left_count: usize,
    right_count: usize,
    edges: &[(usize, usize, u64)],
    size: usize,
) -> Option<BipartiteMatching> {
    for &(x, y, _) in edges {
        assert!(x < left_count && y < right_count, "endpoint out of range");
    }
    let mut match_left: Vec<Option<usize>> = vec![None; left_count];
    let mut match_right: Vec<Option<usize>> = vec![None; right_count];
    // weight[x][y], with usize::MAX encoding "no edge"; parallel edges keep
    // the cheapest.
    let inf = u64::MAX;
    let mut weight = vec![vec![inf; right_count]; left_count];
    for &(x, y, w) in edges {
        weight[x][y] = weight[x][y].min(w);
    }

    for _ in 0..size {
        // Shortest alternating path from any free left vertex to any free
        // right vertex, over residual costs (+w forward, −w backward).
        let nodes = left_count + right_count;
        let mut dist = vec![i128::MAX; nodes];
        let mut parent: Vec<Option<usize>> = vec![None; nodes];
        for x in 0..left_count {
            if match_left[x].is_none() {
                dist[x] = 0;
            }
        }
        for _ in 0..nodes {
            let mut changed = false;
            for x in 0..left_count {
                if dist[x] == i128::MAX {
                    continue;
                }
                for y in 0..right_count {
                    if weight[x][y] == inf || match_left[x] == Some(y) {
                        continue;
                    }
                    let cand = dist[x] + weight[x][y] as i128;
                    if cand < dist[left_count + y] {
                        dist[left_count + y] = cand;
                        parent[left_count + y] = Some(x);
                        changed = true;
                    }
                }
            }
            for y in 0..right_count {
                if dist[left_count + y] == i128::MAX {
                    continue;
                }
                if let Some(x) = match_right[y] {
                    let cand = dist[left_count + y] - weight[x][y] as i128;
                    if cand < dist[x] {
                        dist[x] = cand;
                        parent[x] = Some(left_count + y);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let target = (0..right_count)
            .filter(|&y| match_right[y].is_none() && dist[left_count + y] < i128::MAX)
            .min_by_key(|&y| (dist[left_count + y], y))?;
        // Flip the alternating path ending at `target`.
        let mut y = target;
        loop {
            let x = parent[left_count + y].expect("path reaches a free left vertex");
            let prev = match_left[x];
            match_left[x] = Some(y);
            match_right[y] = Some(x);
            match prev {
                Some(py) => y = py,
                None => break,
            }
        }
    }

    let pairs: Vec<(usize, usize)> = match_left
        .iter()
        .enumerate()
        .filter_map(|(x, my)| my.map(|y| (x, y)))
        .collect();
    let total = pairs.iter().map(|&(x, y)| weight[x][y]).sum();
    Some(BipartiteMatching {
        weight: total,
        pairs,
    })
}
