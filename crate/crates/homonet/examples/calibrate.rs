//! Miniature hyperparameter sweep: a 16-point sub-grid evaluated at
//! N = 400 and ranked by NED against the Bluesky reference.
//!
//! Run with: `cargo run --release --example calibrate`
//! The full search (34,560 configurations) runs via the binary:
//! `homonet calibrate --n 1000 --seeds 1`.

use homonet::calibrate::{self, GridSpec, SearchOptions};
use homonet::pipeline::Pipeline;
use homonet::ReferenceTargets;

fn main() -> homonet::Result<()> {
    let pipeline = Pipeline::default_pipeline()?;
    let targets = ReferenceTargets::bluesky();

    let grid = GridSpec {
        alpha: vec![0.1, 0.16],
        beta: vec![0.0, 0.06],
        delta0: vec![0.2, 0.25],
        lambda: vec![2.5, 3.5],
        delta_cap: vec![0.42],
        eta0: vec![0.05],
        kappa: vec![0.1],
        zeta: vec![36.0],
    };
    println!("sub-grid of {} configurations at N = 400", grid.combination_count());

    let opts = SearchOptions { n: 400, seeds: vec![1], ..SearchOptions::default() };
    let outcome = calibrate::search(&pipeline, &grid, &targets.values, &opts)?;
    println!("{}", calibrate::top_table(&outcome.results, 5));
    println!(
        "pool scales: density {:.2e}, clustering {:.3}, lcc {:.3}, path {:.3}, modularity {:.3}",
        outcome.pool_scales.density,
        outcome.pool_scales.avg_clustering,
        outcome.pool_scales.lcc_proportion,
        outcome.pool_scales.norm_shortest_path,
        outcome.pool_scales.modularity,
    );
    Ok(())
}
