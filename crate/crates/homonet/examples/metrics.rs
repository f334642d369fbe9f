//! Compute the five-metric structural fingerprint of a graph and its NED
//! to the bundled Bluesky reference values.
//!
//! Run with: `cargo run --release --example metrics [edge_list.csv]`
//! Without an argument a 1000-node network is generated first.

use homonet::netmetrics::{self, ned, ReportOptions};
use homonet::pipeline::Pipeline;
use homonet::ReferenceTargets;

fn main() -> homonet::Result<()> {
    let arg = std::env::args().nth(1);
    let graph = match &arg {
        Some(path) => {
            let loaded = homonet::sampling::load_edge_list(std::path::Path::new(path))?;
            println!(
                "loaded {} nodes / {} edges ({} duplicates, {} self-loops dropped)",
                loaded.graph.node_count(),
                loaded.graph.edge_count(),
                loaded.duplicate_edges,
                loaded.self_loops
            );
            loaded.graph
        }
        None => Pipeline::default_pipeline()?.generate(1000, 42)?.graph,
    };

    let report = netmetrics::report(&graph, &ReportOptions::default())?;
    print!("{}", report.to_toml_string());

    let targets = ReferenceTargets::bluesky();
    let d = ned(&report.values(), &targets.values, &targets.effective_scales());
    println!("\nNED to the Bluesky fingerprint (unit scales): {d:.4}");
    Ok(())
}
