//! Communities in a small generated network mirror attribute similarity:
//! Louvain groups line up with shared occupations and interests.
//!
//! Run with: `cargo run --release --example communities [seed]`

use std::collections::BTreeMap;

use homonet::netmetrics::louvain_modularity;
use homonet::pipeline::Pipeline;

fn main() -> homonet::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let n = 30;
    let pipeline = Pipeline::default_pipeline()?;
    let generated = pipeline.generate(n, seed)?;

    let (q, labels) = louvain_modularity(&generated.graph, seed)?;
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (node, &c) in labels.iter().enumerate() {
        groups.entry(c).or_default().push(node);
    }
    println!(
        "{n}-node network, {} edges, {} communities, modularity {q:.3}\n",
        generated.graph.edge_count(),
        groups.len()
    );

    for (community, members) in &groups {
        println!("community {community} ({} members):", members.len());
        for &i in members {
            let p = &generated.profiles[i];
            println!(
                "  {:<10} age {:<3} {:<13} interests: {}",
                p.name,
                p.age,
                p.occupation,
                p.interests.join(", ")
            );
        }
        println!();
    }
    Ok(())
}
