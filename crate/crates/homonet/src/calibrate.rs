//! Grid search over the eight searched hyperparameters, ranked by NED
//! against reference targets.
//!
//! The sweep appends one JSON record per configuration to a checkpoint
//! file, so a killed run resumes where it stopped; records are written in
//! configuration order regardless of worker count. NED needs the pool-wide
//! min-max scales, so it is computed in the final ranking pass once every
//! configuration has metrics (checkpoint records carry `ned: null`).

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linkgen::{generate_network, RawHyperParams};
use crate::netmetrics::{self, min_max_scales, ned, FiveMetrics, ReportOptions};
use crate::pipeline::Pipeline;

/// Value lists for the eight searched hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub delta0: Vec<f64>,
    pub lambda: Vec<f64>,
    pub delta_cap: Vec<f64>,
    pub eta0: Vec<f64>,
    pub kappa: Vec<f64>,
    pub zeta: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        toml::from_str(crate::config::DEFAULT_GRID_TOML).expect("bundled grid parses")
    }
}

impl GridSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let grid: GridSpec = toml::from_str(&text)
            .map_err(|e| Error::Toml { path: path.to_path_buf(), message: e.to_string() })?;
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        let lists = [
            &self.alpha,
            &self.beta,
            &self.delta0,
            &self.lambda,
            &self.delta_cap,
            &self.eta0,
            &self.kappa,
            &self.zeta,
        ];
        if lists.iter().any(|l| l.is_empty()) {
            return Err(Error::Config("every grid list must be non-empty".into()));
        }
        Ok(())
    }

    pub fn combination_count(&self) -> usize {
        self.alpha.len()
            * self.beta.len()
            * self.delta0.len()
            * self.lambda.len()
            * self.delta_cap.len()
            * self.eta0.len()
            * self.kappa.len()
            * self.zeta.len()
    }
}

/// One point of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub alpha: f64,
    pub beta: f64,
    pub delta0: f64,
    pub lambda: f64,
    pub delta_cap: f64,
    pub eta0: f64,
    pub kappa: f64,
    pub zeta: f64,
}

impl GridConfig {
    /// Overlay the searched values onto a base parameter set.
    pub fn apply(&self, base: &RawHyperParams) -> RawHyperParams {
        RawHyperParams {
            affinity_weight: self.alpha,
            noise_weight: self.beta,
            triadic_base: self.delta0,
            triadic_scale: self.lambda,
            triadic_cap: self.delta_cap,
            distant_base: self.eta0,
            distant_scale: self.kappa,
            distant_cap: None,
            candidate_scale: self.zeta,
            ..base.clone()
        }
    }
}

/// Full Cartesian product in lexicographic order of the field lists
/// (alpha slowest, zeta fastest).
pub fn enumerate(grid: &GridSpec) -> Vec<GridConfig> {
    let mut out = Vec::with_capacity(grid.combination_count());
    for &alpha in &grid.alpha {
        for &beta in &grid.beta {
            for &delta0 in &grid.delta0 {
                for &lambda in &grid.lambda {
                    for &delta_cap in &grid.delta_cap {
                        for &eta0 in &grid.eta0 {
                            for &kappa in &grid.kappa {
                                for &zeta in &grid.zeta {
                                    out.push(GridConfig {
                                        alpha,
                                        beta,
                                        delta0,
                                        lambda,
                                        delta_cap,
                                        eta0,
                                        kappa,
                                        zeta,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Evaluation outcome for one configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridResult {
    pub index: usize,
    pub config: GridConfig,
    pub per_seed: Vec<FiveMetrics>,
    pub mean: Option<FiveMetrics>,
    #[serde(default = "default_ned")]
    pub ned: f64,
    #[serde(default)]
    pub rank: usize,
    pub error: Option<String>,
}

fn default_ned() -> f64 {
    f64::INFINITY
}

/// Run the generation pipeline for one configuration; failures are
/// reported, not propagated.
fn measure_config(
    pipeline: &Pipeline,
    config: &GridConfig,
    n: usize,
    seeds: &[u64],
    max_pairs: usize,
) -> (Vec<FiveMetrics>, Option<FiveMetrics>, Option<String>) {
    let raw = config.apply(&pipeline.config.hyperparams);
    let mut per_seed = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let outcome = (|| -> Result<FiveMetrics> {
            let profiles = pipeline.profiles(n, seed)?;
            let matrix = pipeline.project(&profiles, seed)?;
            let graph = generate_network(
                &profiles,
                &matrix,
                &raw,
                pipeline.config.influence.max_score,
                seed,
            )?;
            let report = netmetrics::report(&graph, &ReportOptions { max_pairs, seed })?;
            Ok(report.values())
        })();
        match outcome {
            Ok(values) => per_seed.push(values),
            Err(e) => return (per_seed, None, Some(e.to_string())),
        }
    }
    let mean = FiveMetrics::mean_of(&per_seed);
    (per_seed, Some(mean), None)
}

/// Evaluate one configuration against explicit targets and pool scales.
#[allow(clippy::too_many_arguments)]
pub fn evaluate(
    pipeline: &Pipeline,
    index: usize,
    config: &GridConfig,
    n: usize,
    seeds: &[u64],
    max_pairs: usize,
    targets: &FiveMetrics,
    pool_scales: &FiveMetrics,
) -> GridResult {
    let (per_seed, mean, error) = measure_config(pipeline, config, n, seeds, max_pairs);
    let ned_value = match &mean {
        Some(m) => ned(m, targets, pool_scales),
        None => f64::INFINITY,
    };
    GridResult { index, config: *config, per_seed, mean, ned: ned_value, rank: 0, error }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CheckpointHeader {
    header: bool,
    grid_sha: String,
    n: usize,
    seeds: Vec<u64>,
    total: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CheckpointRecord {
    index: usize,
    config: GridConfig,
    per_seed: Vec<FiveMetrics>,
    metrics: Option<FiveMetrics>,
    ned: Option<f64>,
    error: Option<String>,
}

/// Search options. `limit` bounds how many pending configurations this
/// invocation processes, which is how tests simulate a killed sweep.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub n: usize,
    pub seeds: Vec<u64>,
    pub max_pairs: usize,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    pub limit: Option<usize>,
    pub chunk: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            n: 1000,
            seeds: vec![1],
            max_pairs: 1_000_000,
            checkpoint: None,
            resume: false,
            limit: None,
            chunk: 64,
        }
    }
}

/// Search outcome; `results` are ranked ascending by NED and only present
/// when every configuration has been evaluated.
#[derive(Debug)]
pub struct SearchOutcome {
    pub results: Vec<GridResult>,
    pub pool_scales: FiveMetrics,
    pub evaluated_now: usize,
    pub resumed: usize,
    pub completed: bool,
}

fn grid_fingerprint(grid: &GridSpec, opts: &SearchOptions, base: &RawHyperParams) -> String {
    let payload = serde_json::json!({
        "grid": grid,
        "n": opts.n,
        "seeds": opts.seeds,
        "max_pairs": opts.max_pairs,
        "base": base,
    });
    let mut hasher = Sha256::new();
    hasher.update(payload.to_string().as_bytes());
    format!("{:x}", hasher.finalize())
}

fn read_checkpoint(
    path: &Path,
    expected_sha: &str,
) -> Result<BTreeMap<usize, CheckpointRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut done = BTreeMap::new();
    let mut saw_header = false;
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        if !saw_header {
            let header: CheckpointHeader = serde_json::from_str(&line).map_err(|e| {
                Error::Json { path: path.to_path_buf(), message: e.to_string() }
            })?;
            if header.grid_sha != expected_sha {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint {} was produced by a different sweep",
                    path.display()
                )));
            }
            saw_header = true;
            continue;
        }
        // A record truncated by a kill is simply re-evaluated.
        if let Ok(record) = serde_json::from_str::<CheckpointRecord>(&line) {
            done.insert(record.index, record);
        }
    }
    Ok(done)
}

/// Run (or resume) the sweep.
pub fn search(
    pipeline: &Pipeline,
    grid: &GridSpec,
    targets: &FiveMetrics,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    grid.validate()?;
    let configs = enumerate(grid);
    let sha = grid_fingerprint(grid, opts, &pipeline.config.hyperparams);

    let mut done: BTreeMap<usize, CheckpointRecord> = BTreeMap::new();
    if opts.resume {
        if let Some(path) = &opts.checkpoint {
            if path.exists() {
                done = read_checkpoint(path, &sha)?;
            }
        }
    }
    let resumed = done.len();

    let mut writer = match &opts.checkpoint {
        Some(path) => {
            let continuing = opts.resume && path.exists();
            let file = if continuing {
                OpenOptions::new().append(true).open(path).map_err(|e| Error::io(path, e))?
            } else {
                File::create(path).map_err(|e| Error::io(path, e))?
            };
            let mut w = std::io::BufWriter::new(file);
            if !continuing {
                let header = CheckpointHeader {
                    header: true,
                    grid_sha: sha.clone(),
                    n: opts.n,
                    seeds: opts.seeds.clone(),
                    total: configs.len(),
                };
                writeln!(w, "{}", serde_json::to_string(&header).unwrap())
                    .map_err(|e| Error::io(path, e))?;
                w.flush().map_err(|e| Error::io(path, e))?;
            }
            Some((w, path.clone()))
        }
        None => None,
    };

    let mut pending: Vec<usize> = (0..configs.len()).filter(|i| !done.contains_key(i)).collect();
    if let Some(limit) = opts.limit {
        pending.truncate(limit);
    }
    let evaluated_now = pending.len();

    for chunk in pending.chunks(opts.chunk.max(1)) {
        let records: Vec<CheckpointRecord> = chunk
            .par_iter()
            .map(|&index| {
                let config = configs[index];
                let (per_seed, metrics, error) =
                    measure_config(pipeline, &config, opts.n, &opts.seeds, opts.max_pairs);
                CheckpointRecord { index, config, per_seed, metrics, ned: None, error }
            })
            .collect();
        for record in records {
            if let Some((w, path)) = writer.as_mut() {
                writeln!(w, "{}", serde_json::to_string(&record).unwrap())
                    .map_err(|e| Error::io(path.as_path(), e))?;
                w.flush().map_err(|e| Error::io(path.as_path(), e))?;
            }
            done.insert(record.index, record);
        }
    }

    let completed = done.len() == configs.len();
    if !completed {
        return Ok(SearchOutcome {
            results: Vec::new(),
            pool_scales: FiveMetrics::from_array([0.0; 5]),
            evaluated_now,
            resumed,
            completed,
        });
    }

    // Pool scales: min-max over every finite mean report plus the targets.
    let finite_means: Vec<FiveMetrics> = done
        .values()
        .filter_map(|r| r.metrics)
        .filter(|m| m.is_finite())
        .collect();
    let pool_scales = min_max_scales(finite_means.iter().chain(std::iter::once(targets)));

    let mut results: Vec<GridResult> = done
        .into_values()
        .map(|r| {
            let ned_value = match &r.metrics {
                Some(m) => ned(m, targets, &pool_scales),
                None => f64::INFINITY,
            };
            GridResult {
                index: r.index,
                config: r.config,
                per_seed: r.per_seed,
                mean: r.metrics,
                ned: ned_value,
                rank: 0,
                error: r.error,
            }
        })
        .collect();
    results.sort_by(|a, b| a.ned.total_cmp(&b.ned).then(a.index.cmp(&b.index)));
    for (i, r) in results.iter_mut().enumerate() {
        r.rank = i + 1;
    }

    Ok(SearchOutcome { results, pool_scales, evaluated_now, resumed, completed })
}

/// Write the full ranking, one JSON record per line, best first.
pub fn write_ranking(path: &Path, results: &[GridResult]) -> Result<()> {
    let mut out = String::new();
    for r in results {
        out.push_str(&serde_json::to_string(r).unwrap());
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Human-readable top-k table with the searched columns.
pub fn top_table(results: &[GridResult], k: usize) -> String {
    let mut out = String::from(
        "rank  eta0   kappa  delta0 lambda delta_cap zeta  alpha  beta   NED\n",
    );
    for r in results.iter().take(k) {
        let c = &r.config;
        out.push_str(&format!(
            "{:<5} {:<6} {:<6} {:<6} {:<6} {:<9} {:<5} {:<6} {:<6} {:.6}\n",
            r.rank, c.eta0, c.kappa, c.delta0, c.lambda, c.delta_cap, c.zeta, c.alpha, c.beta, r.ned
        ));
    }
    out
}
