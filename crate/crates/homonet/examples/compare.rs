//! Size trend: generated networks approach the reference fingerprint as
//! they grow. Mean NED over seeds, per size, with pool-wide min-max
//! scaling.
//!
//! Run with: `cargo run --release --example compare [seeds]`

use homonet::netmetrics::{self, min_max_scales, ned, ReportOptions};
use homonet::pipeline::Pipeline;
use homonet::ReferenceTargets;

fn main() -> homonet::Result<()> {
    let seeds: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let sizes = [500usize, 2000, 8000];
    let pipeline = Pipeline::default_pipeline()?;
    let targets = ReferenceTargets::bluesky();

    let mut runs = Vec::new();
    for &size in &sizes {
        for seed in 1..=seeds {
            let graph = pipeline.generate(size, seed)?.graph;
            let report = netmetrics::report(&graph, &ReportOptions::default())?;
            runs.push((size, report.values()));
        }
        println!("measured size {size}");
    }

    let scales =
        min_max_scales(runs.iter().map(|(_, m)| m).chain(std::iter::once(&targets.values)));
    println!("\nsize      mean NED over {seeds} seeds");
    for &size in &sizes {
        let neds: Vec<f64> = runs
            .iter()
            .filter(|(s, _)| *s == size)
            .map(|(_, m)| ned(m, &targets.values, &scales))
            .collect();
        let mean = neds.iter().sum::<f64>() / neds.len() as f64;
        println!("{size:<9} {mean:.4}");
    }
    Ok(())
}
