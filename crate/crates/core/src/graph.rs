//! Dense-indexed simple undirected graph shared by every analysis.

use std::collections::VecDeque;

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are numbered in insertion order; `adj[v]` holds `(neighbour, edge)`
/// pairs in insertion order, which keeps every traversal deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
    matrix: Vec<bool>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            matrix: vec![false; n * n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Inserts `{u, v}` and returns its edge index, or `None` for a
    /// self-loop or an edge that already exists.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Option<usize> {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v || self.has_edge(u, v) {
            return None;
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        self.matrix[u * self.n + v] = true;
        self.matrix[v * self.n + u] = true;
        Some(id)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.n + v]
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    /// `(neighbour, edge index)` pairs incident to `v`.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    /// Hop distances from `source`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_count() == 1
    }

    /// Dense 0/1 adjacency matrix, row-major.
    pub fn adjacency_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| if self.has_edge(i, j) { 1.0 } else { 0.0 }).collect())
            .collect()
    }
}


#[cfg(test)]
mod tests {
    use super::test_graphs::*;
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(0, 1), Some(0));
        assert_eq!(g.add_edge(1, 0), None);
        assert_eq!(g.add_edge(2, 2), None);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn connectivity() {
        assert!(cycle(5).is_connected());
        let mut g = Graph::new(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        assert_eq!(g.component_count(), 2);
        assert!(!g.is_connected());
    }

    #[test]
    fn adjacency_matches_degrees() {
        let g = star(3);
        let a = g.adjacency_rows();
        for (i, row) in a.iter().enumerate() {
            assert_eq!(row.iter().sum::<f64>() as usize, g.degree(i));
            assert_eq!(row[i], 0.0);
        }
        let p = path(3);
        let a = p.adjacency_rows();
        assert_eq!(a[0][2], 0.0);
        assert_eq!(a[0][1], 1.0);
        assert_eq!(a[1][2], 1.0);
        let k = complete(3).adjacency_rows();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(k[i][j], if i == j { 0.0 } else { 1.0 });
            }
        }
    }
}
