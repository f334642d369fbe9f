//! Louvain community detection on the undirected projection.
//!
//! Node visit order is shuffled from a seeded stream per level, community
//! maps iterate in ascending key order, and ties keep the incumbent
//! community, so results are fully deterministic.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use crate::graph::DirectedGraph;
use crate::error::{Error, Result};
use crate::rng;

struct LevelGraph {
    /// Symmetric weighted adjacency; no self entries.
    adj: Vec<Vec<(u32, f64)>>,
    /// Raw internal weight per node (sum of collapsed intra-edges).
    self_w: Vec<f64>,
}

impl LevelGraph {
    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, u: usize) -> f64 {
        self.adj[u].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_w[u]
    }
}

fn one_level(g: &LevelGraph, rng: &mut impl rand::Rng) -> Option<Vec<usize>> {
    let n = g.node_count();
    let degree: Vec<f64> = (0..n).map(|u| g.degree(u)).collect();
    let m2: f64 = degree.iter().sum();
    if m2 <= 0.0 {
        return None;
    }
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot = degree.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut any_move = false;
    loop {
        let mut moves = 0usize;
        for &u in &order {
            let ku = degree[u];
            let cur = comm[u];
            let mut links: BTreeMap<usize, f64> = BTreeMap::new();
            for &(v, w) in &g.adj[u] {
                *links.entry(comm[v as usize]).or_insert(0.0) += w;
            }
            tot[cur] -= ku;
            let stay_w = links.get(&cur).copied().unwrap_or(0.0);
            let mut best_c = cur;
            let mut best_gain = stay_w - tot[cur] * ku / m2;
            for (&c, &w) in &links {
                if c == cur {
                    continue;
                }
                let gain = w - tot[c] * ku / m2;
                if gain > best_gain + 1e-12 {
                    best_gain = gain;
                    best_c = c;
                }
            }
            tot[best_c] += ku;
            if best_c != cur {
                comm[u] = best_c;
                moves += 1;
            }
        }
        if moves == 0 {
            break;
        }
        any_move = true;
    }
    any_move.then_some(comm)
}

/// Renumber arbitrary community labels to 0..C in ascending label order.
fn renumber(comm: &[usize]) -> (Vec<usize>, usize) {
    let mut labels: Vec<usize> = comm.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let lookup: BTreeMap<usize, usize> =
        labels.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    (comm.iter().map(|c| lookup[c]).collect(), labels.len())
}

fn aggregate(g: &LevelGraph, comm: &[usize], communities: usize) -> LevelGraph {
    let mut self_w = vec![0.0; communities];
    let mut maps: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new(); communities];
    for u in 0..g.node_count() {
        let cu = comm[u];
        self_w[cu] += g.self_w[u];
        for &(v, w) in &g.adj[u] {
            let cv = comm[v as usize];
            if cu == cv {
                // Each intra-community edge is visited from both endpoints.
                if u < v as usize {
                    self_w[cu] += w;
                }
            } else {
                *maps[cu].entry(cv as u32).or_insert(0.0) += w;
            }
        }
    }
    let adj = maps.into_iter().map(|m| m.into_iter().collect()).collect();
    LevelGraph { adj, self_w }
}

/// Modularity of `partition` on the simple undirected projection, computed
/// directly from the definition with unit edge weights.
pub fn modularity_of_partition(n: usize, undirected_edges: &[(u32, u32)], partition: &[u32]) -> f64 {
    debug_assert_eq!(partition.len(), n);
    let m = undirected_edges.len() as f64;
    if m == 0.0 {
        return f64::NAN;
    }
    let communities = partition.iter().map(|&c| c as usize).max().unwrap_or(0) + 1;
    let mut internal = vec![0.0f64; communities];
    let mut degree_sum = vec![0.0f64; communities];
    for &(u, v) in undirected_edges {
        let (cu, cv) = (partition[u as usize] as usize, partition[v as usize] as usize);
        degree_sum[cu] += 1.0;
        degree_sum[cv] += 1.0;
        if cu == cv {
            internal[cu] += 1.0;
        }
    }
    (0..communities)
        .map(|c| internal[c] / m - (degree_sum[c] / (2.0 * m)).powi(2))
        .sum()
}

/// Run Louvain on the undirected projection of `g`.
///
/// Returns the modularity of the final partition (recomputed from the
/// definition) and the community id per node.
pub fn louvain_modularity(g: &DirectedGraph, seed: u64) -> Result<(f64, Vec<u32>)> {
    let undirected = undirected_simple_edges(g);
    if undirected.is_empty() {
        return Err(Error::EmptyGraph("modularity"));
    }
    let n = g.node_count();
    let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for &(u, v) in &undirected {
        adj[u as usize].push((v, 1.0));
        adj[v as usize].push((u, 1.0));
    }
    let mut level = LevelGraph { adj, self_w: vec![0.0; n] };
    // partition[node] = index of the node's cluster in the current level.
    let mut partition: Vec<usize> = (0..n).collect();
    let mut best_q = f64::NEG_INFINITY;

    for level_idx in 0..64 {
        let mut level_rng = rng::stream(seed, "louvain", level_idx);
        let Some(comm) = one_level(&level, &mut level_rng) else {
            break;
        };
        let (comm, communities) = renumber(&comm);
        for p in partition.iter_mut() {
            *p = comm[*p];
        }
        let labels: Vec<u32> = partition.iter().map(|&c| c as u32).collect();
        let q = modularity_of_partition(n, &undirected, &labels);
        if q <= best_q + 1e-9 {
            break;
        }
        best_q = q;
        level = aggregate(&level, &comm, communities);
    }

    let labels: Vec<u32> = partition.iter().map(|&c| c as u32).collect();
    let (labels, _) = {
        let as_usize: Vec<usize> = labels.iter().map(|&c| c as usize).collect();
        let (renumbered, count) = renumber(&as_usize);
        (renumbered.into_iter().map(|c| c as u32).collect::<Vec<u32>>(), count)
    };
    let q = modularity_of_partition(n, &undirected, &labels);
    Ok((q, labels))
}

/// Deduplicated undirected edge set of a directed graph (u < v).
pub fn undirected_simple_edges(g: &DirectedGraph) -> Vec<(u32, u32)> {
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .map(|&(u, v)| if u < v { (u, v) } else { (v, u) })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}
