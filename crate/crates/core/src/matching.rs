//! Exact maximum-cardinality bipartite matching.
//!
//! Used after a game to compute its size `n`, and to check that builder
//! constructions really admit a perfect matching. Augmenting paths are
//! searched from each `u` in ascending order, neighbors in ascending order,
//! so results are deterministic.

use serde::{Deserialize, Serialize};

use crate::error::GameError;

/// Bipartite graph `G = (U, D, E)` stored as sorted adjacency lists of `U`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BipartiteGraph {
    d_count: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(d_count: usize) -> Self {
        Self { d_count, adj: Vec::new() }
    }

    /// Builds a graph from adjacency lists; lists are sorted and deduplicated.
    pub fn from_adjacency(d_count: usize, adj: Vec<Vec<usize>>) -> Result<Self, GameError> {
        let mut g = Self::new(d_count);
        for neighbors in adj {
            g.push_vertex(neighbors)?;
        }
        Ok(g)
    }

    /// Appends a new `u` with the given neighborhood and returns its index.
    pub fn push_vertex(&mut self, mut neighbors: Vec<usize>) -> Result<usize, GameError> {
        neighbors.sort_unstable();
        neighbors.dedup();
        if let Some(&d) = neighbors.iter().find(|&&d| d >= self.d_count) {
            return Err(GameError::NeighborOutOfRange { d, d_count: self.d_count });
        }
        self.adj.push(neighbors);
        Ok(self.adj.len() - 1)
    }

    /// Adds the edge `(u, d)`; no-op if it already exists.
    pub fn add_edge(&mut self, u: usize, d: usize) -> Result<(), GameError> {
        if d >= self.d_count {
            return Err(GameError::NeighborOutOfRange { d, d_count: self.d_count });
        }
        let list = &mut self.adj[u];
        if let Err(pos) = list.binary_search(&d) {
            list.insert(pos, d);
        }
        Ok(())
    }

    pub fn u_count(&self) -> usize {
        self.adj.len()
    }

    pub fn d_count(&self) -> usize {
        self.d_count
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, d: usize) -> bool {
        self.adj.get(u).is_some_and(|l| l.binary_search(&d).is_ok())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }
}

/// A matching as a partial injective map `u -> d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<Option<usize>>,
    size: usize,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mate_of_u(&self, u: usize) -> Option<usize> {
        self.pairs.get(u).copied().flatten()
    }

    /// Matched pairs in ascending `u` order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().enumerate().filter_map(|(u, d)| d.map(|d| (u, d)))
    }

    /// True if every pair is an edge of `g` and no `d` is used twice.
    pub fn is_valid_for(&self, g: &BipartiteGraph) -> bool {
        if self.pairs.len() != g.u_count() {
            return false;
        }
        let mut used = vec![false; g.d_count()];
        let mut count = 0;
        for (u, d) in self.pairs() {
            if d >= g.d_count() || !g.has_edge(u, d) || used[d] {
                return false;
            }
            used[d] = true;
            count += 1;
        }
        count == self.size
    }
}

/// Maximum-cardinality matching by repeated augmenting-path search.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let mut mate_u: Vec<Option<usize>> = vec![None; g.u_count()];
    let mut mate_d: Vec<Option<usize>> = vec![None; g.d_count()];
    let mut size = 0;
    for u in 0..g.u_count() {
        let mut seen = vec![false; g.d_count()];
        if augment(g, u, &mut seen, &mut mate_u, &mut mate_d) {
            size += 1;
        }
    }
    Matching { pairs: mate_u, size }
}

// Iterative DFS to keep deep alternating paths off the call stack.
fn augment(
    g: &BipartiteGraph,
    root: usize,
    seen: &mut [bool],
    mate_u: &mut [Option<usize>],
    mate_d: &mut [Option<usize>],
) -> bool {
    // (u, next neighbor position, d through which u was reached)
    let mut stack: Vec<(usize, usize, Option<usize>)> = vec![(root, 0, None)];
    while let Some(top) = stack.last_mut() {
        let (u, pos, _) = *top;
        let Some(&d) = g.neighbors(u).get(pos) else {
            stack.pop();
            continue;
        };
        top.1 += 1;
        if seen[d] {
            continue;
        }
        seen[d] = true;
        match mate_d[d] {
            None => {
                // Flip the path root .. u -> d.
                let mut free_d = d;
                while let Some((w, _, via)) = stack.pop() {
                    mate_d[free_d] = Some(w);
                    mate_u[w] = Some(free_d);
                    match via {
                        Some(prev) => free_d = prev,
                        None => break,
                    }
                }
                return true;
            }
            Some(w) => stack.push((w, 0, Some(d))),
        }
    }
    false
}

/// König-style certificate check: `m` is maximum iff no augmenting path
/// starts at a free `u`.
pub fn is_maximum(g: &BipartiteGraph, m: &Matching) -> bool {
    if !m.is_valid_for(g) {
        return false;
    }
    let mut mate_d: Vec<Option<usize>> = vec![None; g.d_count()];
    for (u, d) in m.pairs() {
        mate_d[d] = Some(u);
    }
    let mut seen_d = vec![false; g.d_count()];
    let mut queue: std::collections::VecDeque<usize> =
        (0..g.u_count()).filter(|&u| m.mate_of_u(u).is_none()).collect();
    while let Some(u) = queue.pop_front() {
        for &d in g.neighbors(u) {
            if seen_d[d] {
                continue;
            }
            seen_d[d] = true;
            match mate_d[d] {
                None => return false,
                Some(w) => queue.push_back(w),
            }
        }
    }
    true
}

/// True iff the graph has a matching saturating both sides.
pub fn has_perfect_matching(g: &BipartiteGraph) -> Result<bool, GameError> {
    if g.u_count() != g.d_count() {
        return Err(GameError::UnbalancedParts { u_count: g.u_count(), d_count: g.d_count() });
    }
    Ok(max_matching(g).size() == g.u_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(g: &BipartiteGraph) -> usize {
        fn go(g: &BipartiteGraph, u: usize, used: &mut Vec<bool>) -> usize {
            if u == g.u_count() {
                return 0;
            }
            let mut best = go(g, u + 1, used);
            for &d in g.neighbors(u) {
                if !used[d] {
                    used[d] = true;
                    best = best.max(1 + go(g, u + 1, used));
                    used[d] = false;
                }
            }
            best
        }
        go(g, 0, &mut vec![false; g.d_count()])
    }

    #[test]
    fn identity_graph_is_perfect() {
        let g = BipartiteGraph::from_adjacency(5, (0..5).map(|i| vec![i]).collect()).unwrap();
        let m = max_matching(&g);
        assert_eq!(m.size(), 5);
        assert!(is_maximum(&g, &m));
        assert!(has_perfect_matching(&g).unwrap());
    }

    #[test]
    fn star_matches_once() {
        let g = BipartiteGraph::from_adjacency(3, vec![vec![0], vec![0], vec![0]]).unwrap();
        assert_eq!(max_matching(&g).size(), 1);
        assert!(!has_perfect_matching(&g).unwrap());
    }

    #[test]
    fn isolated_vertex_blocks_perfect_matching() {
        let g = BipartiteGraph::from_adjacency(2, vec![vec![0, 1], vec![]]).unwrap();
        assert!(!has_perfect_matching(&g).unwrap());
    }

    #[test]
    fn unbalanced_parts_rejected() {
        let g = BipartiteGraph::from_adjacency(3, vec![vec![0]]).unwrap();
        assert!(matches!(has_perfect_matching(&g), Err(GameError::UnbalancedParts { .. })));
    }

    #[test]
    fn out_of_range_neighbor_rejected() {
        assert!(BipartiteGraph::from_adjacency(2, vec![vec![2]]).is_err());
    }

    #[test]
    fn augmenting_path_needed() {
        // greedy u0->d0 must be undone for u1
        let g = BipartiteGraph::from_adjacency(2, vec![vec![0, 1], vec![0]]).unwrap();
        let m = max_matching(&g);
        assert_eq!(m.size(), 2);
        assert_eq!(m.mate_of_u(1), Some(0));
    }

    #[test]
    fn certificate_rejects_non_maximum() {
        let g = BipartiteGraph::from_adjacency(2, vec![vec![0, 1], vec![0]]).unwrap();
        let m = Matching { pairs: vec![Some(0), None], size: 1 };
        assert!(m.is_valid_for(&g));
        assert!(!is_maximum(&g, &m));
    }

    #[test]
    fn exhaustive_small_graphs_match_brute_force() {
        // every graph with 3x3 parts, plus random-ish 5x6 ones
        for mask in 0u32..(1 << 9) {
            let adj = (0..3)
                .map(|u| (0..3).filter(|d| mask >> (u * 3 + d) & 1 == 1).collect())
                .collect();
            let g = BipartiteGraph::from_adjacency(3, adj).unwrap();
            let m = max_matching(&g);
            assert_eq!(m.size(), brute_force(&g), "mask {mask:b}");
            assert!(is_maximum(&g, &m));
        }
    }
}
