//! Subcommand pipeline: generate, metrics, calibrate, sample, compare,
//! bench. Every run writes its primary artifacts plus a manifest with
//! per-phase timings and sha256 checksums.
//!
//! All parallelism is scoped to a per-invocation rayon pool sized by
//! `--workers`; outputs are byte-identical for any worker count.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::calibrate::{self, GridSpec, SearchOptions};
use crate::config::{Catalogs, GeneratorConfig};
use crate::error::{Error, Result};
use crate::netmetrics::{self, min_max_scales, ned, FiveMetrics, ReferenceTargets, ReportOptions};
use crate::pipeline::Pipeline;
use crate::sampling::{self, SampleMethod, SampleSpec};

#[derive(Debug, Parser)]
#[command(name = "homonet", version, about = "Homophily-driven synthetic social network generator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Generator config file (TOML); bundled defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed; every random stream derives from it.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads (default: available cores). `--workers 1` forces
    /// fully sequential execution.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output directory (output file for `sample`). Defaults to a
    /// timestamped directory under ./runs.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic network: profiles, edge list, manifest.
    Generate(GenerateArgs),
    /// Compute the five-metric report for an edge list.
    Metrics(MetricsArgs),
    /// Grid-search hyperparameters and rank configurations by NED.
    Calibrate(CalibrateArgs),
    /// Extract a subgraph from an edge list with a sampling baseline.
    Sample(SampleArgs),
    /// Compare generated networks (and sampler baselines) across sizes.
    Compare(CompareArgs),
    /// Time network generation across sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// Also dump the projection matrix as CSV.
    #[arg(long)]
    dump_projection: bool,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    /// Input edge list (CSV src,dst).
    #[arg(long = "in")]
    input: PathBuf,
    /// Shortest-path budget: exact all-pairs below this, sampled sources
    /// above.
    #[arg(long, default_value_t = 1_000_000)]
    max_pairs: usize,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    /// Grid file (TOML value lists); bundled default grid when omitted.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Network size per evaluation.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Comma-separated seeds evaluated per configuration.
    #[arg(long, default_value = "1")]
    seeds: String,
    /// Reference targets file; bundled Bluesky fingerprint when omitted.
    #[arg(long)]
    targets: Option<PathBuf>,
    /// Resume from an existing sweep checkpoint in the output directory.
    #[arg(long)]
    resume: bool,
    /// Evaluate at most this many pending configurations, then stop
    /// (useful for smoke runs; the checkpoint stays resumable).
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    max_pairs: usize,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// random_node | forest_fire | random_walk | pagerank_node | mhrw
    #[arg(long)]
    method: String,
    /// Sample size in nodes.
    #[arg(long)]
    target: usize,
    /// Source edge list (CSV src,dst).
    #[arg(long = "in")]
    input: PathBuf,
    /// Forest fire forward-burning probability.
    #[arg(long, default_value_t = 0.7)]
    forward_prob: f64,
    /// Random walk restart probability.
    #[arg(long, default_value_t = 0.15)]
    restart_prob: f64,
    /// PageRank damping factor.
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Comma-separated network sizes.
    #[arg(long, default_value = "1000,10000")]
    sizes: String,
    /// Comma-separated seeds (one run per seed per method per size).
    #[arg(long, default_value = "1,2,3")]
    seeds: String,
    /// Real source edge list for the sampling baselines; generator-only
    /// comparison when omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    targets: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    max_pairs: usize,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated network sizes.
    #[arg(long, default_value = "1000")]
    sizes: String,
    /// Repetitions per size.
    #[arg(long, default_value_t = 3)]
    reps: usize,
}

#[derive(Debug, Serialize)]
struct ArtifactEntry {
    path: String,
    sha256: String,
    bytes: u64,
}

#[derive(Debug, Serialize)]
struct RunManifest {
    subcommand: String,
    seed: u64,
    workers: usize,
    args: BTreeMap<String, String>,
    outputs: Vec<ArtifactEntry>,
    timings_s: BTreeMap<String, f64>,
    created_unix: u64,
}

fn sha256_file(path: &Path) -> Result<(String, u64)> {
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 65536];
    let mut total = 0u64;
    loop {
        let read = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if read == 0 {
            break;
        }
        total += read as u64;
        hasher.update(&buf[..read]);
    }
    Ok((format!("{:x}", hasher.finalize()), total))
}

/// Timing + artifact bookkeeping for one subcommand run.
struct RunContext {
    out_dir: PathBuf,
    subcommand: String,
    seed: u64,
    workers: usize,
    args: BTreeMap<String, String>,
    timings: BTreeMap<String, f64>,
    outputs: Vec<PathBuf>,
}

impl RunContext {
    fn new(out_dir: PathBuf, subcommand: &str, seed: u64, workers: usize) -> Result<Self> {
        std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
        Ok(RunContext {
            out_dir,
            subcommand: subcommand.to_string(),
            seed,
            workers,
            args: BTreeMap::new(),
            timings: BTreeMap::new(),
            outputs: Vec::new(),
        })
    }

    fn arg(&mut self, key: &str, value: impl ToString) {
        self.args.insert(key.to_string(), value.to_string());
    }

    fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let value = f()?;
        self.timings.insert(phase.to_string(), start.elapsed().as_secs_f64());
        Ok(value)
    }

    fn artifact(&mut self, path: PathBuf) {
        self.outputs.push(path);
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    /// Write the manifest listing every artifact with its checksum.
    fn finish(mut self) -> Result<PathBuf> {
        let mut outputs = Vec::new();
        for path in &self.outputs {
            let (sha256, bytes) = sha256_file(path)?;
            let rel = path
                .strip_prefix(&self.out_dir)
                .map(|p| p.to_string_lossy().into_owned())
                .unwrap_or_else(|_| path.to_string_lossy().into_owned());
            outputs.push(ArtifactEntry { path: rel, sha256, bytes });
        }
        outputs.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = RunManifest {
            subcommand: self.subcommand.clone(),
            seed: self.seed,
            workers: self.workers,
            args: std::mem::take(&mut self.args),
            outputs,
            timings_s: std::mem::take(&mut self.timings),
            created_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let path = self.out_dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(
            part.parse::<T>()
                .map_err(|_| Error::Cli(format!("bad {what} value {part:?}")))?,
        );
    }
    if out.is_empty() {
        return Err(Error::Cli(format!("empty {what} list")));
    }
    Ok(out)
}

fn load_pipeline(config: Option<&Path>) -> Result<Pipeline> {
    let catalogs = Catalogs::load()?;
    let config = match config {
        Some(path) => GeneratorConfig::load(path, &catalogs)?,
        None => GeneratorConfig::default_config(&catalogs)?,
    };
    Pipeline::new(config, catalogs)
}

fn load_targets(path: Option<&Path>) -> Result<ReferenceTargets> {
    match path {
        Some(p) => ReferenceTargets::load(p),
        None => Ok(ReferenceTargets::bluesky()),
    }
}

fn default_out_dir(subcommand: &str, seed: u64) -> PathBuf {
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    PathBuf::from("runs").join(format!("{subcommand}-s{seed}-{stamp}"))
}

/// Entry point used by the binary and by tests.
pub fn run_from<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Cli(e.to_string()))?;
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|v| v.get()).unwrap_or(1))
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Cli(format!("failed to build worker pool: {e}")))?;
    pool.install(|| dispatch(cli, workers))
}

fn dispatch(cli: Cli, workers: usize) -> Result<()> {
    let seed = cli.seed;
    let config = cli.config.as_deref();
    match cli.command {
        Command::Generate(args) => cmd_generate(args, config, seed, workers, cli.out),
        Command::Metrics(args) => cmd_metrics(args, seed, workers, cli.out),
        Command::Calibrate(args) => cmd_calibrate(args, config, seed, workers, cli.out),
        Command::Sample(args) => cmd_sample(args, seed, workers, cli.out),
        Command::Compare(args) => cmd_compare(args, config, seed, workers, cli.out),
        Command::Bench(args) => cmd_bench(args, config, seed, workers, cli.out),
    }
}

fn cmd_generate(
    args: GenerateArgs,
    config: Option<&Path>,
    seed: u64,
    workers: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    if args.n < 2 {
        return Err(Error::TooFewNodes(args.n));
    }
    let out_dir = out.unwrap_or_else(|| default_out_dir("generate", seed));
    let mut ctx = RunContext::new(out_dir, "generate", seed, workers)?;
    ctx.arg("n", args.n);

    let pipeline = load_pipeline(config)?;
    let profiles = ctx.timed("profiles", || pipeline.profiles(args.n, seed))?;
    let matrix = ctx.timed("projection", || pipeline.project(&profiles, seed))?;
    let graph = ctx.timed("links", || {
        crate::linkgen::generate_network(
            &profiles,
            &matrix,
            &pipeline.config.hyperparams,
            pipeline.config.influence.max_score,
            seed,
        )
    })?;

    let profiles_path = ctx.path("profiles.jsonl");
    let edges_path = ctx.path("edges.csv");
    ctx.timed("write", || {
        crate::attrgen::write_profiles(&profiles_path, &profiles)?;
        graph.write_edge_csv(&edges_path)?;
        Ok(())
    })?;
    ctx.artifact(profiles_path);
    ctx.artifact(edges_path);
    if args.dump_projection {
        let path = ctx.path("projection.csv");
        matrix.write_csv(&path)?;
        ctx.artifact(path);
    }

    println!(
        "generated n={} edges={} (seed {seed}) -> {}",
        args.n,
        graph.edge_count(),
        ctx.out_dir.display()
    );
    ctx.finish()?;
    Ok(())
}

fn cmd_metrics(args: MetricsArgs, seed: u64, workers: usize, out: Option<PathBuf>) -> Result<()> {
    let out_dir = out.unwrap_or_else(|| default_out_dir("metrics", seed));
    let mut ctx = RunContext::new(out_dir, "metrics", seed, workers)?;
    ctx.arg("in", args.input.display());
    ctx.arg("max_pairs", args.max_pairs);

    let loaded = ctx.timed("load", || sampling::load_edge_list(&args.input))?;
    if loaded.duplicate_edges > 0 || loaded.self_loops > 0 {
        eprintln!(
            "note: dropped {} duplicate edges and {} self-loops",
            loaded.duplicate_edges, loaded.self_loops
        );
    }
    let report = ctx.timed("metrics", || {
        netmetrics::report(&loaded.graph, &ReportOptions { max_pairs: args.max_pairs, seed })
    })?;
    let path = ctx.path("metrics.toml");
    report.write(&path)?;
    ctx.artifact(path);
    print!("{}", report.to_toml_string());
    ctx.finish()?;
    if !report.values().is_finite() {
        return Err(Error::UndefinedMetrics);
    }
    Ok(())
}

fn cmd_calibrate(
    args: CalibrateArgs,
    config: Option<&Path>,
    seed: u64,
    workers: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let out_dir = out.unwrap_or_else(|| default_out_dir("calibrate", seed));
    let mut ctx = RunContext::new(out_dir, "calibrate", seed, workers)?;
    let pipeline = load_pipeline(config)?;
    let grid = match &args.grid {
        Some(path) => GridSpec::load(path)?,
        None => GridSpec::default(),
    };
    let targets = load_targets(args.targets.as_deref())?;
    let seeds: Vec<u64> = parse_list(&args.seeds, "seed")?;
    ctx.arg("n", args.n);
    ctx.arg("seeds", &args.seeds);
    ctx.arg("configs", grid.combination_count());

    let opts = SearchOptions {
        n: args.n,
        seeds,
        max_pairs: args.max_pairs,
        checkpoint: Some(ctx.path("sweep.jsonl")),
        resume: args.resume,
        limit: args.limit,
        chunk: 64,
    };
    let outcome = ctx.timed("search", || {
        calibrate::search(&pipeline, &grid, &targets.values, &opts)
    })?;
    ctx.artifact(ctx.path("sweep.jsonl"));

    if !outcome.completed {
        println!(
            "sweep checkpointed: {} evaluated now, {} resumed, {} remaining",
            outcome.evaluated_now,
            outcome.resumed,
            grid.combination_count() - outcome.evaluated_now - outcome.resumed
        );
        ctx.finish()?;
        return Ok(());
    }

    let ranking_path = ctx.path("ranking.jsonl");
    calibrate::write_ranking(&ranking_path, &outcome.results)?;
    ctx.artifact(ranking_path);
    let table = calibrate::top_table(&outcome.results, 5);
    let top_path = ctx.path("top5.txt");
    std::fs::write(&top_path, &table).map_err(|e| Error::io(&top_path, e))?;
    ctx.artifact(top_path);
    println!("{table}");
    ctx.finish()?;
    Ok(())
}

fn cmd_sample(args: SampleArgs, seed: u64, workers: usize, out: Option<PathBuf>) -> Result<()> {
    let method = SampleMethod::from_str(&args.method)?;
    // For `sample`, --out names the output edge-list file.
    let out_file = out.unwrap_or_else(|| default_out_dir("sample", seed).join("sample.csv"));
    let out_dir = out_file.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let mut ctx = RunContext::new(out_dir, "sample", seed, workers)?;
    ctx.arg("method", method.name());
    ctx.arg("target", args.target);
    ctx.arg("in", args.input.display());

    let loaded = ctx.timed("load", || sampling::load_edge_list(&args.input))?;
    let mut spec = SampleSpec::new(method, args.target, seed);
    spec.forward_prob = args.forward_prob;
    spec.restart_prob = args.restart_prob;
    spec.damping = args.damping;
    let sampled = ctx.timed("sample", || sampling::sample(&loaded.graph, &spec))?;

    sampled.graph.write_edge_csv(&out_file)?;
    let map_path = out_file.with_extension("idmap.csv");
    sampling::write_id_map(&map_path, &loaded.id_map, &sampled.nodes)?;
    ctx.artifact(out_file.clone());
    ctx.artifact(map_path);

    println!(
        "sampled {} nodes / {} edges via {} -> {}",
        sampled.graph.node_count(),
        sampled.graph.edge_count(),
        method.name(),
        out_file.display()
    );
    // Manifest sits next to the sample output.
    let manifest = ctx.finish()?;
    let _ = manifest;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct CompareRun {
    size: usize,
    method: String,
    seed: u64,
    metrics: FiveMetrics,
    ned: f64,
}

fn cmd_compare(
    args: CompareArgs,
    config: Option<&Path>,
    seed: u64,
    workers: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let out_dir = out.unwrap_or_else(|| default_out_dir("compare", seed));
    let mut ctx = RunContext::new(out_dir, "compare", seed, workers)?;
    let pipeline = load_pipeline(config)?;
    let targets = load_targets(args.targets.as_deref())?;
    let sizes: Vec<usize> = parse_list(&args.sizes, "size")?;
    let seeds: Vec<u64> = parse_list(&args.seeds, "seed")?;
    ctx.arg("sizes", &args.sizes);
    ctx.arg("seeds", &args.seeds);

    let source = match &args.input {
        Some(path) => {
            let loaded = ctx.timed("load", || sampling::load_edge_list(path))?;
            Some(loaded)
        }
        None => None,
    };

    // (size, method, seed) -> metrics; NED filled once the pool is known.
    let mut runs: Vec<(usize, String, u64, FiveMetrics)> = Vec::new();
    for &size in &sizes {
        for &run_seed in &seeds {
            let generated = pipeline.generate(size, run_seed)?;
            let report = netmetrics::report(
                &generated.graph,
                &ReportOptions { max_pairs: args.max_pairs, seed: run_seed },
            )?;
            runs.push((size, "generator".into(), run_seed, report.values()));
        }
        if let Some(loaded) = &source {
            if size > loaded.graph.node_count() {
                eprintln!(
                    "note: skipping samplers at size {size} (source has {} nodes)",
                    loaded.graph.node_count()
                );
                continue;
            }
            for method in SampleMethod::ALL {
                for &run_seed in &seeds {
                    let spec = SampleSpec::new(method, size, run_seed);
                    let sampled = sampling::sample(&loaded.graph, &spec)?;
                    let report = netmetrics::report(
                        &sampled.graph,
                        &ReportOptions { max_pairs: args.max_pairs, seed: run_seed },
                    )?;
                    runs.push((size, method.name().into(), run_seed, report.values()));
                }
            }
        }
    }

    // Pool-wide min-max scales over every run plus the reference point.
    let scales = min_max_scales(
        runs.iter().map(|(_, _, _, m)| m).chain(std::iter::once(&targets.values)),
    );
    let rows: Vec<CompareRun> = runs
        .into_iter()
        .map(|(size, method, run_seed, metrics)| CompareRun {
            size,
            method,
            seed: run_seed,
            ned: ned(&metrics, &targets.values, &scales),
            metrics,
        })
        .collect();

    let runs_path = ctx.path("compare_runs.csv");
    {
        let mut text = String::from(
            "size,method,seed,density,avg_clustering,lcc_proportion,norm_shortest_path,modularity,ned\n",
        );
        for r in &rows {
            let m = r.metrics.as_array();
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.size, r.method, r.seed, m[0], m[1], m[2], m[3], m[4], r.ned
            ));
        }
        std::fs::write(&runs_path, text).map_err(|e| Error::io(&runs_path, e))?;
    }
    ctx.artifact(runs_path);

    // Per-(size, method) mean and standard deviation of NED over seeds.
    let mut groups: BTreeMap<(usize, String), Vec<f64>> = BTreeMap::new();
    for r in &rows {
        groups.entry((r.size, r.method.clone())).or_default().push(r.ned);
    }
    let summary_path = ctx.path("compare_summary.csv");
    {
        let mut text = String::from("size,method,runs,ned_mean,ned_std\n");
        println!("size      method          NED (mean +/- std over seeds)");
        for ((size, method), neds) in &groups {
            let n = neds.len() as f64;
            let mean = neds.iter().sum::<f64>() / n;
            let var = neds.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let std = var.sqrt();
            text.push_str(&format!("{size},{method},{},{mean},{std}\n", neds.len()));
            println!("{size:<9} {method:<15} {mean:.4} +/- {std:.4}");
        }
        std::fs::write(&summary_path, text).map_err(|e| Error::io(&summary_path, e))?;
    }
    ctx.artifact(summary_path);
    ctx.finish()?;
    Ok(())
}

fn cmd_bench(
    args: BenchArgs,
    config: Option<&Path>,
    seed: u64,
    workers: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let out_dir = out.unwrap_or_else(|| default_out_dir("bench", seed));
    let mut ctx = RunContext::new(out_dir, "bench", seed, workers)?;
    let pipeline = load_pipeline(config)?;
    let sizes: Vec<usize> = parse_list(&args.sizes, "size")?;
    if args.reps < 1 {
        return Err(Error::Cli("need at least one repetition".into()));
    }
    ctx.arg("sizes", &args.sizes);
    ctx.arg("reps", args.reps);

    let mut text = String::from("size,reps,mean_s,std_s\n");
    println!("size      reps  mean_s    std_s");
    for &size in &sizes {
        let mut times = Vec::with_capacity(args.reps);
        for rep in 0..args.reps {
            let start = Instant::now();
            let generated = pipeline.generate(size, seed.wrapping_add(rep as u64))?;
            let elapsed = start.elapsed().as_secs_f64();
            times.push(elapsed);
            drop(generated);
        }
        let n = times.len() as f64;
        let mean = times.iter().sum::<f64>() / n;
        let std = (times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n).sqrt();
        text.push_str(&format!("{size},{},{mean},{std}\n", args.reps));
        println!("{size:<9} {:<5} {mean:<9.3} {std:.3}", args.reps);
        ctx.timings.insert(format!("generate_{size}"), mean);
    }
    let path = ctx.path("bench.csv");
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    ctx.artifact(path);
    ctx.finish()?;
    Ok(())
}
