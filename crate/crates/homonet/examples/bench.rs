//! Wall-clock scaling of the generator.
//!
//! Run with: `cargo run --release --example bench [reps]`

use std::time::Instant;

use homonet::pipeline::Pipeline;

fn main() -> homonet::Result<()> {
    let reps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let pipeline = Pipeline::default_pipeline()?;

    println!("size      reps  mean_s    std_s     edges");
    for size in [1000usize, 10_000, 100_000] {
        let mut times = Vec::new();
        let mut edges = 0;
        for rep in 0..reps {
            let start = Instant::now();
            let generated = pipeline.generate(size, 42 + rep as u64)?;
            times.push(start.elapsed().as_secs_f64());
            edges = generated.graph.edge_count();
        }
        let mean = times.iter().sum::<f64>() / reps as f64;
        let std = (times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / reps as f64).sqrt();
        println!("{size:<9} {reps:<5} {mean:<9.3} {std:<9.3} {edges}");
    }
    Ok(())
}
