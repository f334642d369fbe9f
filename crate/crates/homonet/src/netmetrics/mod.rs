//! The five-metric structural fingerprint and the NED realism score.
//!
//! Density is computed on the directed graph; clustering, connectivity,
//! shortest paths and modularity use the undirected projection.

mod louvain;

use std::collections::VecDeque;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use louvain::{louvain_modularity, modularity_of_partition, undirected_simple_edges};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rng;

/// Fraction of realized directed edges over all ordered pairs.
pub fn density(g: &DirectedGraph) -> f64 {
    let n = g.node_count() as f64;
    g.edge_count() as f64 / (n * (n - 1.0))
}

/// Mean local clustering coefficient of the undirected projection; nodes of
/// degree < 2 contribute zero.
pub fn avg_clustering(g: &DirectedGraph) -> f64 {
    let adj = g.undirected_adj();
    let n = g.node_count();
    let coefficients: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|u| {
            let nu = &adj[u];
            let k = nu.len();
            if k < 2 {
                return 0.0;
            }
            // Sum over neighbors v of |N(u) ∩ N(v)| counts every edge
            // between neighbors of u exactly twice.
            let mut twice_links = 0usize;
            for &v in nu {
                twice_links += sorted_intersection_count(nu, &adj[v as usize]);
            }
            twice_links as f64 / (k * (k - 1)) as f64
        })
        .collect();
    // Sequential sum keeps the result independent of the worker count.
    coefficients.iter().sum::<f64>() / n as f64
}

fn sorted_intersection_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn components(adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start as u32]);
        let mut members = vec![start as u32];
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    members.push(v);
                    queue.push_back(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Share of nodes inside the largest weakly connected component.
pub fn lcc_proportion(g: &DirectedGraph) -> f64 {
    let adj = g.undirected_adj();
    let largest = components(&adj).into_iter().map(|c| c.len()).max().unwrap_or(0);
    largest as f64 / g.node_count() as f64
}

fn bfs_distance_sum(adj: &[Vec<u32>], src: u32) -> (u64, u64) {
    let mut dist = vec![u32::MAX; adj.len()];
    dist[src as usize] = 0;
    let mut queue = VecDeque::from([src]);
    let (mut sum, mut count) = (0u64, 0u64);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &v in &adj[u as usize] {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = du + 1;
                sum += (du + 1) as u64;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    (sum, count)
}

/// Mean shortest path over pairs inside the LCC of the undirected
/// projection, divided by log2(N).
///
/// All-pairs BFS when the LCC pair count fits in `max_pairs`; otherwise a
/// uniform sample of `max_pairs` BFS sources. Returns the normalized value
/// and the number of pairs that entered the estimate; NaN for an edgeless
/// graph.
pub fn norm_shortest_path(g: &DirectedGraph, max_pairs: usize, seed: u64) -> (f64, u64) {
    if g.edge_count() == 0 {
        return (f64::NAN, 0);
    }
    let adj = g.undirected_adj();
    let lcc = components(&adj)
        .into_iter()
        .max_by_key(|c| (c.len(), std::cmp::Reverse(c.first().copied().unwrap_or(0))))
        .expect("non-empty graph");
    let s = lcc.len();
    let total_pairs = s as u64 * (s as u64 - 1) / 2;
    let exact = total_pairs <= max_pairs as u64;
    let sources: Vec<u32> = if exact {
        lcc.clone()
    } else {
        let mut rng = rng::stream(seed, "shortest-path", 0);
        rng::index_sample(&mut rng, s, max_pairs).into_iter().map(|i| lcc[i]).collect()
    };
    let partials: Vec<(u64, u64)> =
        sources.par_iter().map(|&src| bfs_distance_sum(&adj, src)).collect();
    let (sum, count) = partials
        .into_iter()
        .fold((0u64, 0u64), |(s0, c0), (s1, c1)| (s0 + s1, c0 + c1));
    let mean = sum as f64 / count as f64;
    let value = mean / (g.node_count() as f64).log2();
    let pairs = if exact { total_pairs } else { count };
    (value, pairs)
}

/// The five-metric fingerprint as a plain value bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveMetrics {
    pub density: f64,
    pub avg_clustering: f64,
    pub lcc_proportion: f64,
    pub norm_shortest_path: f64,
    pub modularity: f64,
}

impl FiveMetrics {
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.density,
            self.avg_clustering,
            self.lcc_proportion,
            self.norm_shortest_path,
            self.modularity,
        ]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        FiveMetrics {
            density: a[0],
            avg_clustering: a[1],
            lcc_proportion: a[2],
            norm_shortest_path: a[3],
            modularity: a[4],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    /// Element-wise mean; NaN-propagating.
    pub fn mean_of(values: &[FiveMetrics]) -> FiveMetrics {
        let mut acc = [0.0f64; 5];
        for v in values {
            for (a, x) in acc.iter_mut().zip(v.as_array()) {
                *a += x;
            }
        }
        for a in acc.iter_mut() {
            *a /= values.len() as f64;
        }
        FiveMetrics::from_array(acc)
    }
}

/// Options for [`report`].
#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    pub max_pairs: usize,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { max_pairs: 1_000_000, seed: 0 }
    }
}

/// Full metric report with the sampling parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub density: f64,
    pub avg_clustering: f64,
    pub lcc_proportion: f64,
    pub norm_shortest_path: f64,
    pub modularity: f64,
    pub n: usize,
    pub e: usize,
    pub sp_pairs_sampled: u64,
    pub seed: u64,
}

impl MetricsReport {
    pub fn values(&self) -> FiveMetrics {
        FiveMetrics {
            density: self.density,
            avg_clustering: self.avg_clustering,
            lcc_proportion: self.lcc_proportion,
            norm_shortest_path: self.norm_shortest_path,
            modularity: self.modularity,
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("metrics report serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text)
            .map_err(|e| Error::Toml { path: path.to_path_buf(), message: e.to_string() })
    }
}

/// Compute all five metrics. Undefined quantities (shortest path and
/// modularity of an edgeless graph) surface as NaN markers.
pub fn report(g: &DirectedGraph, opts: &ReportOptions) -> Result<MetricsReport> {
    if g.node_count() < 2 {
        return Err(Error::TooFewNodes(g.node_count()));
    }
    let (sp, pairs) = norm_shortest_path(g, opts.max_pairs, opts.seed);
    let modularity = match louvain_modularity(g, opts.seed) {
        Ok((q, _)) => q,
        Err(Error::EmptyGraph(_)) => f64::NAN,
        Err(e) => return Err(e),
    };
    Ok(MetricsReport {
        density: density(g),
        avg_clustering: avg_clustering(g),
        lcc_proportion: lcc_proportion(g),
        norm_shortest_path: sp,
        modularity,
        n: g.node_count(),
        e: g.edge_count(),
        sp_pairs_sampled: pairs,
        seed: opts.seed,
    })
}

/// Reference fingerprint with optional explicit NED scales.
#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceTargets {
    #[serde(flatten)]
    pub values: FiveMetrics,
    #[serde(default)]
    pub scales: Option<FiveMetrics>,
}

impl ReferenceTargets {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, path)
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let t: ReferenceTargets = toml::from_str(text)
            .map_err(|e| Error::Toml { path: origin.to_path_buf(), message: e.to_string() })?;
        if let Some(s) = &t.scales {
            if s.as_array().iter().any(|&v| !(v > 0.0)) {
                return Err(Error::Config("NED scales must be positive".into()));
            }
        }
        Ok(t)
    }

    /// The bundled Bluesky reference values.
    pub fn bluesky() -> Self {
        Self::from_toml_str(crate::config::BLUESKY_TARGETS_TOML, Path::new("<bundled targets>"))
            .expect("bundled targets parse")
    }

    pub fn effective_scales(&self) -> FiveMetrics {
        self.scales.unwrap_or(FiveMetrics::from_array([1.0; 5]))
    }
}

/// Normalized Euclidean distance between two fingerprints.
///
/// Degenerate scales (zero, negative or non-finite) contribute nothing;
/// non-finite metric values on either side yield +infinity.
pub fn ned(values: &FiveMetrics, targets: &FiveMetrics, scales: &FiveMetrics) -> f64 {
    let v = values.as_array();
    let t = targets.as_array();
    let s = scales.as_array();
    let mut sum = 0.0;
    for i in 0..5 {
        if !v[i].is_finite() || !t[i].is_finite() {
            return f64::INFINITY;
        }
        if !(s[i] > 0.0) || !s[i].is_finite() {
            continue;
        }
        let z = (v[i] - t[i]) / s[i];
        sum += z * z;
    }
    sum.sqrt()
}

/// Per-metric span (max - min) over a pool of fingerprints; non-finite
/// entries are ignored.
pub fn min_max_scales<'a>(pool: impl IntoIterator<Item = &'a FiveMetrics>) -> FiveMetrics {
    let mut lo = [f64::INFINITY; 5];
    let mut hi = [f64::NEG_INFINITY; 5];
    for m in pool {
        for (i, v) in m.as_array().into_iter().enumerate() {
            if v.is_finite() {
                lo[i] = lo[i].min(v);
                hi[i] = hi[i].max(v);
            }
        }
    }
    let mut span = [0.0; 5];
    for i in 0..5 {
        if hi[i] > lo[i] {
            span[i] = hi[i] - lo[i];
        }
    }
    FiveMetrics::from_array(span)
}
