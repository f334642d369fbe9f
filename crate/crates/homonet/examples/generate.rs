//! Generate a synthetic follower network and look at its basic shape.
//!
//! Run with: `cargo run --release --example generate [n] [seed]`

use homonet::pipeline::Pipeline;

fn main() -> homonet::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);

    let pipeline = Pipeline::default_pipeline()?;
    let generated = pipeline.generate(n, seed)?;
    let graph = &generated.graph;

    println!("nodes: {}", graph.node_count());
    println!("edges: {}", graph.edge_count());

    let mut out_deg = vec![0usize; n];
    for &(u, _) in graph.edges() {
        out_deg[u as usize] += 1;
    }
    let max_out = out_deg.iter().copied().max().unwrap_or(0);
    let mean_out = out_deg.iter().sum::<usize>() as f64 / n as f64;
    println!("out-degree: mean {mean_out:.2}, max {max_out}");

    // Profiles drive the structure: high-influence nodes follow more.
    let mut ranked: Vec<usize> = (0..n).collect();
    ranked.sort_by(|&a, &b| {
        generated.profiles[b].influence.total_cmp(&generated.profiles[a].influence)
    });
    println!("\ntop-5 influence:");
    for &i in ranked.iter().take(5) {
        let p = &generated.profiles[i];
        println!(
            "  #{:<4} {:<10} age {:<3} {:<12} influence {:>6.1}  out-degree {}",
            p.id, p.name, p.age, p.occupation, p.influence, out_deg[i]
        );
    }
    Ok(())
}
