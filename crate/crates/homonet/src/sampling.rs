//! Structure-preserving subgraph samplers for baseline comparison, plus
//! streaming edge-list ingestion for real follower graphs.
//!
//! Walk-based samplers operate on the undirected projection so they cannot
//! dead-end in a follower digraph; every sampler returns the induced
//! subgraph on exactly `target` nodes and is deterministic under a fixed
//! seed.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMethod {
    RandomNode,
    ForestFire,
    RandomWalk,
    PagerankNode,
    Mhrw,
}

impl SampleMethod {
    pub const ALL: [SampleMethod; 5] = [
        SampleMethod::RandomNode,
        SampleMethod::ForestFire,
        SampleMethod::RandomWalk,
        SampleMethod::PagerankNode,
        SampleMethod::Mhrw,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SampleMethod::RandomNode => "random_node",
            SampleMethod::ForestFire => "forest_fire",
            SampleMethod::RandomWalk => "random_walk",
            SampleMethod::PagerankNode => "pagerank_node",
            SampleMethod::Mhrw => "mhrw",
        }
    }
}

impl FromStr for SampleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random_node" => Ok(SampleMethod::RandomNode),
            "forest_fire" => Ok(SampleMethod::ForestFire),
            "random_walk" => Ok(SampleMethod::RandomWalk),
            "pagerank_node" => Ok(SampleMethod::PagerankNode),
            "mhrw" => Ok(SampleMethod::Mhrw),
            other => Err(Error::Cli(format!(
                "unknown sampling method {other:?}; expected one of random_node, forest_fire, random_walk, pagerank_node, mhrw"
            ))),
        }
    }
}

/// Sampler parameters; the method-specific fields carry the
/// literature-standard defaults.
#[derive(Debug, Clone)]
pub struct SampleSpec {
    pub method: SampleMethod,
    pub target: usize,
    /// Forest fire forward-burning probability.
    pub forward_prob: f64,
    /// Random walk restart probability.
    pub restart_prob: f64,
    /// PageRank damping factor.
    pub damping: f64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(method: SampleMethod, target: usize, seed: u64) -> Self {
        SampleSpec {
            method,
            target,
            forward_prob: 0.7,
            restart_prob: 0.15,
            damping: 0.85,
            seed,
        }
    }

    fn validate(&self, source_nodes: usize) -> Result<()> {
        if self.target < 1 {
            return Err(Error::Config("sample target must be at least 1".into()));
        }
        if self.target > source_nodes {
            return Err(Error::TargetTooLarge { target: self.target, available: source_nodes });
        }
        for p in [self.forward_prob, self.restart_prob, self.damping] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::Config("sampler probabilities must lie in [0,1)".into()));
            }
        }
        Ok(())
    }
}

/// A sampled subgraph together with the selected source node ids
/// (ascending; position = dense id in the subgraph).
#[derive(Debug)]
pub struct Sampled {
    pub graph: DirectedGraph,
    pub nodes: Vec<u32>,
}

/// Result of streaming an edge-list file.
#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: DirectedGraph,
    /// Dense id -> original id, in order of first appearance.
    pub id_map: Vec<String>,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

/// Stream a CSV edge list (`src,dst` per line). Node ids are arbitrary
/// strings remapped to dense `0..N` by first appearance; duplicate edges
/// and self-loops are dropped and counted.
pub fn load_edge_list(path: &Path) -> Result<LoadedGraph> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut id_map: Vec<String> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut self_loops = 0usize;

    let intern = |ids: &mut HashMap<String, u32>, id_map: &mut Vec<String>, token: &str| {
        if let Some(&dense) = ids.get(token) {
            dense
        } else {
            let dense = id_map.len() as u32;
            ids.insert(token.to_string(), dense);
            id_map.push(token.to_string());
            dense
        }
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split(',');
        let (src, dst) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) if !a.trim().is_empty() && !b.trim().is_empty() => {
                (a.trim(), b.trim())
            }
            _ => return Err(Error::MalformedEdge { path: path.to_path_buf(), line: lineno + 1 }),
        };
        let u = intern(&mut ids, &mut id_map, src);
        let v = intern(&mut ids, &mut id_map, dst);
        if u == v {
            self_loops += 1;
            continue;
        }
        edges.push((u, v));
    }

    let before = edges.len();
    edges.sort_unstable();
    edges.dedup();
    let duplicate_edges = before - edges.len();
    let graph = DirectedGraph::from_edges_unchecked(id_map.len(), edges);
    Ok(LoadedGraph { graph, id_map, duplicate_edges, self_loops })
}

/// Write the `orig_id,dense_id` remapping table for a node selection.
pub fn write_id_map(path: &Path, id_map: &[String], nodes: &[u32]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for (dense, &node) in nodes.iter().enumerate() {
        writeln!(w, "{},{}", id_map[node as usize], dense).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Dispatch on the sampling method.
pub fn sample(g: &DirectedGraph, spec: &SampleSpec) -> Result<Sampled> {
    spec.validate(g.node_count())?;
    let nodes = match spec.method {
        SampleMethod::RandomNode => random_node_set(g, spec),
        SampleMethod::ForestFire => forest_fire_set(g, spec),
        SampleMethod::RandomWalk => random_walk_set(g, spec)?,
        SampleMethod::PagerankNode => pagerank_node_set(g, spec),
        SampleMethod::Mhrw => mhrw_set(g, spec)?,
    };
    debug_assert_eq!(nodes.len(), spec.target);
    let graph = g.induced_subgraph(&nodes);
    Ok(Sampled { graph, nodes })
}

/// Uniform pool over not-yet-visited nodes with O(1) draw and removal.
struct UnvisitedPool {
    items: Vec<u32>,
    position: Vec<usize>,
}

impl UnvisitedPool {
    fn new(n: usize) -> Self {
        UnvisitedPool { items: (0..n as u32).collect(), position: (0..n).collect() }
    }

    fn contains(&self, node: u32) -> bool {
        self.position[node as usize] != usize::MAX
    }

    fn remove(&mut self, node: u32) {
        let pos = self.position[node as usize];
        if pos == usize::MAX {
            return;
        }
        let last = *self.items.last().expect("pool not empty");
        self.items.swap_remove(pos);
        self.position[last as usize] = if last == node { usize::MAX } else { pos };
        self.position[node as usize] = usize::MAX;
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> u32 {
        self.items[rng.gen_range(0..self.items.len())]
    }
}

fn random_node_set(g: &DirectedGraph, spec: &SampleSpec) -> Vec<u32> {
    let mut rng = rng::stream(spec.seed, "sample-random-node", 0);
    let mut nodes: Vec<u32> = rng::index_sample(&mut rng, g.node_count(), spec.target)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    nodes.sort_unstable();
    nodes
}

/// Number of failures before the first success of a Bernoulli(1 - p)
/// sequence; mean p / (1 - p).
fn geometric(rng: &mut ChaCha8Rng, p: f64) -> usize {
    if p <= 0.0 {
        return 0;
    }
    let u = rng::open_closed(rng);
    (u.ln() / p.ln()).floor() as usize
}

fn forest_fire_set(g: &DirectedGraph, spec: &SampleSpec) -> Vec<u32> {
    let out = g.out_adj();
    let mut rng = rng::stream(spec.seed, "sample-forest-fire", 0);
    let mut pool = UnvisitedPool::new(g.node_count());
    let mut burned: Vec<u32> = Vec::with_capacity(spec.target);
    let mut queue: std::collections::VecDeque<u32> = std::collections::VecDeque::new();

    while burned.len() < spec.target {
        if queue.is_empty() {
            let ambassador = pool.draw(&mut rng);
            pool.remove(ambassador);
            burned.push(ambassador);
            queue.push_back(ambassador);
            continue;
        }
        let u = queue.pop_front().expect("non-empty queue");
        let unburned: Vec<u32> =
            out[u as usize].iter().copied().filter(|&v| pool.contains(v)).collect();
        if unburned.is_empty() {
            continue;
        }
        let burn_count = geometric(&mut rng, spec.forward_prob).min(unburned.len());
        let picks = rng::index_sample(&mut rng, unburned.len(), burn_count);
        for idx in picks {
            if burned.len() >= spec.target {
                break;
            }
            let v = unburned[idx];
            pool.remove(v);
            burned.push(v);
            queue.push_back(v);
        }
    }
    burned.sort_unstable();
    burned
}

fn random_walk_set(g: &DirectedGraph, spec: &SampleSpec) -> Result<Vec<u32>> {
    let adj = g.undirected_adj();
    let mut rng = rng::stream(spec.seed, "sample-random-walk", 0);
    let mut pool = UnvisitedPool::new(g.node_count());
    let mut visited: Vec<u32> = Vec::with_capacity(spec.target);
    let budget = 100usize.saturating_mul(spec.target);

    let mut start = pool.draw(&mut rng);
    pool.remove(start);
    visited.push(start);
    let mut current = start;
    let mut idle_steps = 0usize;

    while visited.len() < spec.target {
        let stuck = adj[current as usize].is_empty() || idle_steps > budget;
        if stuck {
            // Re-seed the walker on an unvisited node.
            start = pool.draw(&mut rng);
            pool.remove(start);
            visited.push(start);
            current = start;
            idle_steps = 0;
            continue;
        }
        if rng.gen::<f64>() < spec.restart_prob {
            current = start;
            idle_steps += 1;
            continue;
        }
        let neighbors = &adj[current as usize];
        current = neighbors[rng.gen_range(0..neighbors.len())];
        if pool.contains(current) {
            pool.remove(current);
            visited.push(current);
            idle_steps = 0;
        } else {
            idle_steps += 1;
        }
    }
    visited.sort_unstable();
    Ok(visited)
}

/// PageRank scores by power iteration to an L1 residual below `tol`.
pub fn pagerank(g: &DirectedGraph, damping: f64, tol: f64) -> Vec<f64> {
    let n = g.node_count();
    let in_adj = g.in_adj();
    let out_deg = g.out_degrees();
    let mut scores = vec![1.0 / n as f64; n];
    for _ in 0..1000 {
        let dangling: f64 = (0..n).filter(|&u| out_deg[u] == 0).map(|u| scores[u]).sum();
        let base = (1.0 - damping) / n as f64 + damping * dangling / n as f64;
        let next: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|v| {
                let mut acc = 0.0;
                for &u in &in_adj[v] {
                    acc += scores[u as usize] / out_deg[u as usize] as f64;
                }
                base + damping * acc
            })
            .collect();
        let residual: f64 = next.iter().zip(scores.iter()).map(|(a, b)| (a - b).abs()).sum();
        scores = next;
        if residual < tol {
            break;
        }
    }
    scores
}

fn pagerank_node_set(g: &DirectedGraph, spec: &SampleSpec) -> Vec<u32> {
    let scores = pagerank(g, spec.damping, 1e-8);
    let mut order: Vec<u32> = (0..g.node_count() as u32).collect();
    order.sort_by(|&a, &b| {
        scores[b as usize]
            .total_cmp(&scores[a as usize])
            .then(a.cmp(&b))
    });
    let mut nodes: Vec<u32> = order.into_iter().take(spec.target).collect();
    nodes.sort_unstable();
    nodes
}

fn mhrw_set(g: &DirectedGraph, spec: &SampleSpec) -> Result<Vec<u32>> {
    let adj = g.undirected_adj();
    let mut rng = rng::stream(spec.seed, "sample-mhrw", 0);
    let mut pool = UnvisitedPool::new(g.node_count());
    let mut visited: Vec<u32> = Vec::with_capacity(spec.target);
    let budget = 100usize.saturating_mul(spec.target);

    let mut current = pool.draw(&mut rng);
    pool.remove(current);
    visited.push(current);
    let mut idle_steps = 0usize;

    while visited.len() < spec.target {
        if adj[current as usize].is_empty() || idle_steps > budget {
            current = pool.draw(&mut rng);
            pool.remove(current);
            visited.push(current);
            idle_steps = 0;
            continue;
        }
        let neighbors = &adj[current as usize];
        let proposal = neighbors[rng.gen_range(0..neighbors.len())];
        let ratio = adj[current as usize].len() as f64 / adj[proposal as usize].len() as f64;
        if rng.gen::<f64>() < ratio.min(1.0) {
            current = proposal;
            if pool.contains(current) {
                pool.remove(current);
                visited.push(current);
                idle_steps = 0;
                continue;
            }
        }
        idle_steps += 1;
    }
    visited.sort_unstable();
    Ok(visited)
}

/// Visit counts of a Metropolis-Hastings walk over `steps` transitions
/// (rejections count as staying). The stationary distribution over a
/// connected graph is uniform.
pub fn mhrw_visit_counts(g: &DirectedGraph, steps: usize, seed: u64) -> Vec<u64> {
    let adj = g.undirected_adj();
    let mut rng = rng::stream(seed, "mhrw-stationarity", 0);
    let mut counts = vec![0u64; g.node_count()];
    let mut current = rng.gen_range(0..g.node_count()) as u32;
    counts[current as usize] += 1;
    for _ in 0..steps {
        let neighbors = &adj[current as usize];
        if neighbors.is_empty() {
            break;
        }
        let proposal = neighbors[rng.gen_range(0..neighbors.len())];
        let ratio = neighbors.len() as f64 / adj[proposal as usize].len() as f64;
        if rng.gen::<f64>() < ratio.min(1.0) {
            current = proposal;
        }
        counts[current as usize] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> DirectedGraph {
        let edges: Vec<(u32, u32)> =
            (0..n as u32).map(|u| (u, (u + 1) % n as u32)).collect();
        DirectedGraph::new(n, edges).unwrap()
    }

    #[test]
    fn load_edge_list_with_string_ids() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("edges.csv");
        std::fs::write(&path, "a,b\n").unwrap();
        let loaded = load_edge_list(&path).unwrap();
        assert_eq!(loaded.graph.node_count(), 2);
        assert_eq!(loaded.graph.edge_count(), 1);
        assert_eq!(loaded.id_map, vec!["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn load_edge_list_counts_duplicates_and_self_loops() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("edges.csv");
        std::fs::write(&path, "a,b\na,b\nc,c\nb,a\n").unwrap();
        let loaded = load_edge_list(&path).unwrap();
        assert_eq!(loaded.graph.edge_count(), 2);
        assert_eq!(loaded.duplicate_edges, 1);
        assert_eq!(loaded.self_loops, 1);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("edges.csv");
        std::fs::write(&path, "a,b\nbroken\n").unwrap();
        let err = load_edge_list(&path).unwrap_err();
        assert!(err.to_string().contains(":2"), "{err}");
    }

    #[test]
    fn random_node_full_target_returns_whole_graph() {
        let g = ring(12);
        let sampled = sample(&g, &SampleSpec::new(SampleMethod::RandomNode, 12, 1)).unwrap();
        assert_eq!(sampled.graph.node_count(), 12);
        assert_eq!(sampled.graph.edge_count(), 12);
    }

    #[test]
    fn random_node_single_target_has_no_edges() {
        let g = ring(12);
        let sampled = sample(&g, &SampleSpec::new(SampleMethod::RandomNode, 1, 1)).unwrap();
        assert_eq!(sampled.graph.node_count(), 1);
        assert_eq!(sampled.graph.edge_count(), 0);
    }

    #[test]
    fn samplers_are_deterministic_and_exact_sized() {
        let g = ring(60);
        for method in SampleMethod::ALL {
            let spec = SampleSpec::new(method, 20, 9);
            let a = sample(&g, &spec).unwrap();
            let b = sample(&g, &spec).unwrap();
            assert_eq!(a.nodes, b.nodes, "{method:?}");
            assert_eq!(a.nodes.len(), 20, "{method:?}");
            a.graph.validate().unwrap();
        }
    }

    #[test]
    fn forest_fire_with_zero_forward_prob_is_random_node_like() {
        // Every fire burns only its ambassador, so the visited set is a
        // uniform draw of isolated seeds.
        let g = ring(40);
        let mut spec = SampleSpec::new(SampleMethod::ForestFire, 15, 3);
        spec.forward_prob = 0.0;
        let sampled = sample(&g, &spec).unwrap();
        assert_eq!(sampled.nodes.len(), 15);
    }

    #[test]
    fn forest_fire_with_high_forward_prob_spreads_from_one_seed() {
        // On a strongly connected ring, p_f -> 1 burns long contiguous arcs.
        let g = ring(100);
        let mut spec = SampleSpec::new(SampleMethod::ForestFire, 50, 4);
        spec.forward_prob = 0.95;
        let sampled = sample(&g, &spec).unwrap();
        // Count maximal contiguous runs on the ring; a BFS-like burn keeps
        // the number of fragments far below the random-node expectation.
        let set: std::collections::HashSet<u32> = sampled.nodes.iter().copied().collect();
        let fragments = sampled
            .nodes
            .iter()
            .filter(|&&v| !set.contains(&((v + 100 - 1) % 100)))
            .count();
        assert!(fragments <= 10, "fragments = {fragments}");
    }

    #[test]
    fn random_walk_with_no_restart_covers_a_contiguous_segment() {
        // On a path graph the visited set of a walk is an interval.
        let edges: Vec<(u32, u32)> = (0..39u32).map(|u| (u, u + 1)).collect();
        let g = DirectedGraph::new(40, edges).unwrap();
        let mut spec = SampleSpec::new(SampleMethod::RandomWalk, 10, 5);
        spec.restart_prob = 0.0;
        let sampled = sample(&g, &spec).unwrap();
        let min = *sampled.nodes.first().unwrap();
        let max = *sampled.nodes.last().unwrap();
        assert_eq!((max - min + 1) as usize, sampled.nodes.len(), "interval");
    }

    #[test]
    fn pagerank_star_hub_scores_highest() {
        let edges: Vec<(u32, u32)> = (1..8u32).map(|u| (u, 0)).collect();
        let g = DirectedGraph::new(8, edges).unwrap();
        let scores = pagerank(&g, 0.85, 1e-10);
        let hub = scores[0];
        assert!(scores[1..].iter().all(|&s| s < hub));
        let sampled = sample(&g, &SampleSpec::new(SampleMethod::PagerankNode, 1, 0)).unwrap();
        assert_eq!(sampled.nodes, vec![0]);
    }

    #[test]
    fn pagerank_uniform_on_cycle_selects_lowest_ids() {
        let g = ring(10);
        let scores = pagerank(&g, 0.85, 1e-12);
        for &s in &scores {
            assert!((s - 0.1).abs() < 1e-9);
        }
        let sampled = sample(&g, &SampleSpec::new(SampleMethod::PagerankNode, 3, 0)).unwrap();
        assert_eq!(sampled.nodes, vec![0, 1, 2]);
    }

    #[test]
    fn pagerank_zero_damping_is_uniform() {
        let edges = vec![(0, 1), (1, 2), (2, 0), (0, 2)];
        let g = DirectedGraph::new(4, edges).unwrap();
        let scores = pagerank(&g, 0.0, 1e-12);
        for &s in &scores {
            assert!((s - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn mhrw_acceptance_ratio_is_degree_corrected() {
        // Regular graph: every proposal accepted, so the walk is a plain
        // random walk and coverage grows quickly.
        let g = ring(30);
        let sampled = sample(&g, &SampleSpec::new(SampleMethod::Mhrw, 10, 7)).unwrap();
        assert_eq!(sampled.nodes.len(), 10);
    }

    #[test]
    fn mhrw_stationary_distribution_is_near_uniform() {
        // 20-node connected graph with heterogeneous degrees.
        let mut edges: Vec<(u32, u32)> = (0..19u32).map(|u| (u, u + 1)).collect();
        edges.extend([(0, 5), (0, 10), (0, 15), (3, 12), (7, 18)]);
        let g = DirectedGraph::new(20, edges).unwrap();
        let counts = mhrw_visit_counts(&g, 1_000_000, 11);
        let total: u64 = counts.iter().sum();
        let tv: f64 = counts
            .iter()
            .map(|&c| (c as f64 / total as f64 - 0.05).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.05, "total variation {tv}");
    }

    #[test]
    fn target_larger_than_source_is_rejected() {
        let g = ring(5);
        let err = sample(&g, &SampleSpec::new(SampleMethod::RandomNode, 9, 0)).unwrap_err();
        assert!(matches!(err, Error::TargetTooLarge { .. }));
    }
}
