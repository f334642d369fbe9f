//! Rebuild a semantic ordering from a pairwise similarity table.
//!
//! The bundled occupation/interest orderings were produced offline the
//! same way: average-linkage clustering over word-embedding cosine
//! similarities, read off in dendrogram leaf order.
//!
//! Run with: `cargo run --example semantic_ordering`

use homonet::semspace::build_semantic_map;

fn main() -> homonet::Result<()> {
    let labels: Vec<String> = ["Engineer", "Artist", "Technician", "Painter", "Programmer"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    // Toy cosine-similarity table (symmetric, unit diagonal).
    let sim = vec![
        vec![1.00, 0.10, 0.85, 0.12, 0.80], // Engineer
        vec![0.10, 1.00, 0.15, 0.90, 0.20], // Artist
        vec![0.85, 0.15, 1.00, 0.18, 0.75], // Technician
        vec![0.12, 0.90, 0.18, 1.00, 0.22], // Painter
        vec![0.80, 0.20, 0.75, 0.22, 1.00], // Programmer
    ];

    let map = build_semantic_map(&labels, &sim)?;
    println!("semantic order:");
    for label in map.labels() {
        println!("  {:<12} rank {:>2}  index {:.3}", label, map.rank(label).unwrap(), map.index(label).unwrap());
    }
    println!("\nsimilar labels land on adjacent ranks; a label's normalized");
    println!("index is what the projection uses as its coordinate.");
    Ok(())
}
