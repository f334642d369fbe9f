//! Run every sampling baseline against a synthetic source graph and rank
//! the samples by NED, with random node sampling as the worst-case
//! baseline.
//!
//! Run with: `cargo run --release --example sample`

use homonet::netmetrics::{self, min_max_scales, ned, ReportOptions};
use homonet::pipeline::Pipeline;
use homonet::sampling::{sample, SampleMethod, SampleSpec};
use homonet::{FiveMetrics, ReferenceTargets};

fn main() -> homonet::Result<()> {
    let source_n = 20_000;
    let target = 1000;
    println!("generating a {source_n}-node source graph...");
    let source = Pipeline::default_pipeline()?.generate(source_n, 7)?.graph;

    let targets = ReferenceTargets::bluesky();
    let mut rows: Vec<(&'static str, FiveMetrics)> = Vec::new();
    for method in SampleMethod::ALL {
        let sampled = sample(&source, &SampleSpec::new(method, target, 11))?;
        let report = netmetrics::report(&sampled.graph, &ReportOptions::default())?;
        println!(
            "{:<14} {} nodes, {} edges",
            method.name(),
            sampled.graph.node_count(),
            sampled.graph.edge_count()
        );
        rows.push((method.name(), report.values()));
    }

    let scales =
        min_max_scales(rows.iter().map(|(_, m)| m).chain(std::iter::once(&targets.values)));
    let mut ranked: Vec<(&str, f64)> = rows
        .iter()
        .map(|(name, m)| (*name, ned(m, &targets.values, &scales)))
        .collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1));

    println!("\nNED to the reference fingerprint (lower = more faithful):");
    for (name, d) in ranked {
        println!("  {name:<14} {d:.4}");
    }
    Ok(())
}
