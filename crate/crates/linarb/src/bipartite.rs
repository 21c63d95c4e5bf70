//! Bipartite views between two disjoint vertex sets of a host graph.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Bipartite graph over two disjoint lists of host-graph vertices.
///
/// Adjacency is held in side-local indices; `left`/`right` map back to
/// host vertex ids.
#[derive(Debug, Clone)]
pub struct Bipartite {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    adj: Vec<Vec<usize>>, // left-local -> sorted right-local neighbors
}

impl Bipartite {
    /// Builds the bipartite graph from explicit (left-local, right-local)
    /// edges.
    pub fn new(left: Vec<usize>, right: Vec<usize>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); left.len()];
        for &(i, j) in edges {
            if i >= left.len() || j >= right.len() {
                return Err(Error::InvalidParameter(format!(
                    "bipartite edge ({i},{j}) out of range"
                )));
            }
            adj[i].push(j);
        }
        for list in &mut adj {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter("parallel bipartite edge".into()));
            }
        }
        Ok(Bipartite { left, right, adj })
    }

    /// The subgraph of `g` induced between `left` and `right`.
    ///
    /// The two sets must be disjoint; edges inside either set are ignored
    /// by construction.
    pub fn induced(g: &Graph, left: &[usize], right: &[usize]) -> Self {
        let mut right_index = vec![usize::MAX; g.n()];
        for (j, &v) in right.iter().enumerate() {
            right_index[v] = j;
        }
        let mut adj = vec![Vec::new(); left.len()];
        for (i, &u) in left.iter().enumerate() {
            for &w in g.neighbors(u) {
                let j = right_index[w];
                if j != usize::MAX {
                    adj[i].push(j);
                }
            }
            adj[i].sort_unstable();
        }
        Bipartite {
            left: left.to_vec(),
            right: right.to_vec(),
            adj,
        }
    }

    pub fn n_left(&self) -> usize {
        self.left.len()
    }

    pub fn n_right(&self) -> usize {
        self.right.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn left_degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.right.len()];
        for list in &self.adj {
            for &j in list {
                deg[j] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        let left = self.adj.iter().map(Vec::len).max().unwrap_or(0);
        let right = self.right_degrees().into_iter().max().unwrap_or(0);
        left.max(right)
    }

    /// Edges as (left-local, right-local) pairs in deterministic order.
    pub fn local_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list {
                out.push((i, j));
            }
        }
        out
    }

    /// Edges in host-graph vertex ids.
    pub fn host_edges(&self) -> Vec<(usize, usize)> {
        self.local_edges()
            .into_iter()
            .map(|(i, j)| (self.left[i], self.right[j]))
            .collect()
    }

    /// Flattens to a plain graph on `n_left + n_right` local vertices
    /// (left first), plus the local → host id table.
    pub fn to_graph(&self) -> (Graph, Vec<usize>) {
        let nl = self.n_left();
        let edges: Vec<(usize, usize)> = self
            .local_edges()
            .into_iter()
            .map(|(i, j)| (i, nl + j))
            .collect();
        let g = Graph::from_edges(nl + self.n_right(), &edges)
            .expect("bipartite view is simple");
        let mut table = self.left.clone();
        table.extend_from_slice(&self.right);
        (g, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_view_picks_up_cross_edges_only() {
        // path 0-1-2-3 plus chord 0-2
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let b = Bipartite::induced(&g, &[0, 1], &[2, 3]);
        assert_eq!(b.m(), 2);
        let mut host = b.host_edges();
        host.sort_unstable();
        assert_eq!(host, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn to_graph_keeps_degrees() {
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let b = Bipartite::induced(&g, &[0, 1], &[2, 3]);
        assert_eq!(b.max_degree(), 2);
        let (local, table) = b.to_graph();
        assert_eq!(local.m(), 4);
        assert_eq!(table, vec![0, 1, 2, 3]);
    }
}
