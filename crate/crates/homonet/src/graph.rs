//! Directed graph container shared by the generator, the metric suite and
//! the samplers.
//!
//! Edges are `(src, dst)` pairs meaning "src follows dst". The structure is
//! deliberately plain: adjacency views are built on demand by the consumers
//! that need them.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl DirectedGraph {
    /// Build a graph, validating endpoints, self-loops and duplicates.
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        let g = DirectedGraph { n, edges };
        g.validate()?;
        Ok(g)
    }

    /// Build without validation. The caller must guarantee the invariants;
    /// the generator does so structurally.
    pub fn from_edges_unchecked(n: usize, edges: Vec<(u32, u32)>) -> Self {
        DirectedGraph { n, edges }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Full invariant rescan: endpoints in range, no self-loops, no
    /// duplicate directed edges.
    pub fn validate(&self) -> Result<()> {
        for &(u, v) in &self.edges {
            if u as usize >= self.n || v as usize >= self.n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) outside node range 0..{}",
                    self.n
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
        }
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate directed edge".into()));
        }
        Ok(())
    }

    /// Undirected adjacency view: sorted, deduplicated neighbor lists.
    pub fn undirected_adj(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Out-neighbor lists (sorted).
    pub fn out_adj(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// In-neighbor lists (sorted).
    pub fn in_adj(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn out_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &(u, _) in &self.edges {
            deg[u as usize] += 1;
        }
        deg
    }

    /// Write the edge list as CSV `src,dst`, sorted by `(src, dst)`.
    pub fn write_edge_csv(&self, path: &Path) -> Result<()> {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        for (u, v) in sorted {
            writeln!(w, "{u},{v}").map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Induced subgraph on `nodes` (must be sorted and deduplicated).
    /// Nodes are relabeled to `0..nodes.len()` in ascending original order.
    pub fn induced_subgraph(&self, nodes: &[u32]) -> DirectedGraph {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if let (Ok(nu), Ok(nv)) = (nodes.binary_search(&u), nodes.binary_search(&v)) {
                edges.push((nu as u32, nv as u32));
            }
        }
        DirectedGraph { n: nodes.len(), edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_self_loops_and_dups() {
        assert!(DirectedGraph::new(3, vec![(0, 1), (1, 2)]).is_ok());
        assert!(DirectedGraph::new(3, vec![(0, 0)]).is_err());
        assert!(DirectedGraph::new(3, vec![(0, 1), (0, 1)]).is_err());
        assert!(DirectedGraph::new(2, vec![(0, 5)]).is_err());
    }

    #[test]
    fn undirected_adjacency_merges_directions() {
        let g = DirectedGraph::new(3, vec![(0, 1), (1, 0), (1, 2)]).unwrap();
        let adj = g.undirected_adj();
        assert_eq!(adj[0], vec![1]);
        assert_eq!(adj[1], vec![0, 2]);
        assert_eq!(adj[2], vec![1]);
    }

    #[test]
    fn induced_subgraph_keeps_only_internal_edges() {
        let g = DirectedGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sub = g.induced_subgraph(&[0, 1, 3]);
        assert_eq!(sub.node_count(), 3);
        // (0,1) survives as (0,1); (3,0) survives as (2,0).
        let mut edges = sub.edges().to_vec();
        edges.sort_unstable();
        assert_eq!(edges, vec![(0, 1), (2, 0)]);
    }

    #[test]
    fn edge_csv_is_sorted(){
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("edges.csv");
        let g = DirectedGraph::new(3, vec![(2, 0), (0, 1), (1, 0)]).unwrap();
        g.write_edge_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "0,1\n1,0\n2,0\n");
    }
}
