//! Bipartite graphs on labelled sides `X = 0..n_left`, `Y = 0..n_right`.

use crate::hypergraph::{CoreError, Hypergraph};

/// A simple bipartite graph. Edges are `(x, y)` pairs, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<(u32, u32)>,
}

impl BipartiteGraph {
    pub fn new(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<BipartiteGraph, CoreError> {
        let mut es: Vec<(u32, u32)> = edges.into_iter().collect();
        for &(x, y) in &es {
            if x as usize >= n_left || y as usize >= n_right {
                return Err(CoreError::BipartiteOutOfRange {
                    x,
                    y,
                    n_left,
                    n_right,
                });
            }
        }
        es.sort_unstable();
        es.dedup();
        Ok(BipartiteGraph {
            n_left,
            n_right,
            edges: es,
        })
    }

    pub fn complete(n_left: usize, n_right: usize) -> BipartiteGraph {
        let edges = (0..n_left as u32)
            .flat_map(|x| (0..n_right as u32).map(move |y| (x, y)))
            .collect();
        BipartiteGraph {
            n_left,
            n_right,
            edges,
        }
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.edges.binary_search(&(x, y)).is_ok()
    }

    /// Adjacency lists over the unified vertex ids `0..n_left+n_right`,
    /// where side Y is offset by `n_left`. Neighbor lists are sorted.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let off = self.n_left as u32;
        let mut adj = vec![Vec::new(); self.n_left + self.n_right];
        for &(x, y) in &self.edges {
            adj[x as usize].push(off + y);
            adj[(off + y) as usize].push(x);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    /// The same graph as a 2-uniform hypergraph on `n_left + n_right`
    /// vertices (side Y offset by `n_left`), with the two sides recorded as
    /// partition metadata.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let off = self.n_left as u32;
        let edges = self.edges.iter().map(|&(x, y)| vec![x, off + y]);
        Hypergraph::new(2, self.n_left + self.n_right, edges)
            .expect("bipartite edges are valid 2-edges")
            .with_partition(vec![0..off, off..off + self.n_right as u32])
            .expect("sides are disjoint ranges")
    }
}
