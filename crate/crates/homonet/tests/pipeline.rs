//! End-to-end pipeline and CLI integration tests: artifact formats,
//! manifest checksums, error paths and the statistical invariants that sit
//! above single modules.

use std::path::Path;

use rand::Rng;

use homonet::graph::DirectedGraph;
use homonet::netmetrics::{self, norm_shortest_path};
use homonet::pipeline::Pipeline;
use homonet::rng::stream;

fn run(args: &[&str]) -> homonet::Result<()> {
    let mut full = vec!["homonet"];
    full.extend_from_slice(args);
    homonet::cli::run_from(full)
}

#[test]
fn generate_rejects_single_node() {
    let err = run(&["generate", "--n", "1"]).unwrap_err();
    assert!(err.to_string().contains("at least 2 nodes"), "{err}");
}

#[test]
fn generate_writes_sorted_edges_and_valid_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g");
    run(&["generate", "--n", "200", "--seed", "3", "--out", out.to_str().unwrap()]).unwrap();

    let edges_text = std::fs::read_to_string(out.join("edges.csv")).unwrap();
    let rows: Vec<(u32, u32)> = edges_text
        .lines()
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert!(rows.windows(2).all(|w| w[0] < w[1]), "edge list must be sorted");

    // Manifest checksums must match the files on disk.
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let outputs = manifest["outputs"].as_array().unwrap();
    assert!(!outputs.is_empty());
    for entry in outputs {
        let rel = entry["path"].as_str().unwrap();
        let bytes = std::fs::read(out.join(rel)).unwrap();
        use sha2::Digest;
        let digest = format!("{:x}", sha2::Sha256::digest(&bytes));
        assert_eq!(digest, entry["sha256"].as_str().unwrap(), "checksum of {rel}");
        assert_eq!(bytes.len() as u64, entry["bytes"].as_u64().unwrap());
    }
    // Timings are per phase and non-negative.
    for (_, v) in manifest["timings_s"].as_object().unwrap() {
        assert!(v.as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn generate_same_flags_identical_checksums() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        run(&["generate", "--n", "150", "--seed", "11", "--out", out.to_str().unwrap()]).unwrap();
    }
    for file in ["profiles.jsonl", "edges.csv"] {
        assert_eq!(
            std::fs::read(a.join(file)).unwrap(),
            std::fs::read(b.join(file)).unwrap(),
            "{file} must be byte-identical"
        );
    }
}

#[test]
fn metrics_on_edgeless_graph_writes_markers_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.csv");
    // Only self-loops: two nodes survive, zero edges.
    std::fs::write(&edges, "a,a\nb,b\n").unwrap();
    let out = dir.path().join("m");
    let err = run(&["metrics", "--in", edges.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .unwrap_err();
    assert!(matches!(err, homonet::Error::UndefinedMetrics), "{err}");
    let report = std::fs::read_to_string(out.join("metrics.toml")).unwrap();
    assert!(report.contains("norm_shortest_path = nan"), "{report}");
}

#[test]
fn metrics_records_max_pairs_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out_g = dir.path().join("g");
    run(&["generate", "--n", "300", "--seed", "2", "--out", out_g.to_str().unwrap()]).unwrap();
    let out_m = dir.path().join("m");
    run(&[
        "metrics",
        "--in",
        out_g.join("edges.csv").to_str().unwrap(),
        "--max-pairs",
        "100",
        "--seed",
        "2",
        "--out",
        out_m.to_str().unwrap(),
    ])
    .unwrap();
    let report = netmetrics::MetricsReport::load(&out_m.join("metrics.toml")).unwrap();
    // 100 BFS sources over the (connected) 300-node graph: 100 * 299 pairs.
    assert_eq!(report.sp_pairs_sampled, 100 * 299);
    assert_eq!(report.seed, 2);
}

#[test]
fn sample_emits_where_the_idmap_points() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.csv");
    std::fs::write(&edges, "u1,u2\nu2,u3\nu3,u1\nu4,u1\n").unwrap();
    let out = dir.path().join("s.csv");
    run(&[
        "sample", "--method", "random_node", "--target", "3", "--in",
        edges.to_str().unwrap(), "--seed", "4", "--out", out.to_str().unwrap(),
    ])
    .unwrap();
    let sample_text = std::fs::read_to_string(&out).unwrap();
    let idmap_text = std::fs::read_to_string(dir.path().join("s.idmap.csv")).unwrap();
    assert_eq!(idmap_text.lines().count(), 3);
    for line in idmap_text.lines() {
        let (orig, dense) = line.split_once(',').unwrap();
        assert!(orig.starts_with('u'));
        let dense: usize = dense.parse().unwrap();
        assert!(dense < 3);
    }
    // Sampled edges reference dense ids only.
    for line in sample_text.lines() {
        let (a, b) = line.split_once(',').unwrap();
        assert!(a.parse::<u32>().unwrap() < 3);
        assert!(b.parse::<u32>().unwrap() < 3);
    }
}

#[test]
fn sampled_shortest_path_estimator_converges() {
    // Sparse random graphs with N = 2000: a 500-source estimate stays
    // within 3% of the exact value, twenty times out of twenty.
    let n = 2000;
    for trial in 0..20u64 {
        let mut rng = stream(trial, "sp-convergence", 0);
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            // ~6 directed edges per node keeps the graph connected.
            for _ in 0..6 {
                let v = rng.gen_range(0..n as u32);
                if v != u {
                    edges.push((u, v));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let g = DirectedGraph::new(n, edges).unwrap();
        let (exact, _) = norm_shortest_path(&g, usize::MAX, trial);
        let (sampled, pairs) = norm_shortest_path(&g, 500, trial);
        assert!(pairs < (n * (n - 1) / 2) as u64, "estimator must subsample");
        let rel = ((sampled - exact) / exact).abs();
        assert!(rel < 0.03, "trial {trial}: exact {exact:.4} sampled {sampled:.4} ({rel:.4})");
    }
}

#[test]
fn influence_correlates_with_out_degree() {
    // Spearman rank correlation between influence and out-degree at
    // N = 1000 must exceed 0.3.
    let pipeline = Pipeline::default_pipeline().unwrap();
    let generated = pipeline.generate(1000, 6).unwrap();
    let mut out_deg = vec![0f64; 1000];
    for &(u, _) in generated.graph.edges() {
        out_deg[u as usize] += 1.0;
    }
    let influence: Vec<f64> = generated.profiles.iter().map(|p| p.influence).collect();
    let rho = spearman(&influence, &out_deg);
    assert!(rho > 0.3, "Spearman correlation {rho:.3}");
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb) * (y - mb)).sum();
    cov / (va.sqrt() * vb.sqrt())
}

#[test]
fn data_dir_override_is_honored() {
    // Point HOMONET_DATA_DIR at a copy of the bundled data; behavior must
    // be identical to the embedded catalogs.
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    std::fs::create_dir(&data).unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for f in ["occupations.txt", "interests.txt", "names_female.txt", "names_male.txt"] {
        std::fs::copy(src.join(f), data.join(f)).unwrap();
    }
    std::env::set_var("HOMONET_DATA_DIR", &data);
    let catalogs = homonet::Catalogs::load().unwrap();
    std::env::remove_var("HOMONET_DATA_DIR");
    assert_eq!(catalogs.occupation_order, homonet::Catalogs::embedded().occupation_order);
}

#[test]
fn bench_emits_one_row_per_size_with_roughly_monotone_timings() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    run(&[
        "bench", "--sizes", "200,2000", "--reps", "2", "--seed", "1",
        "--out", out.to_str().unwrap(),
    ])
    .unwrap();
    let text = std::fs::read_to_string(out.join("bench.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("size,"));
    assert!(lines[1].starts_with("200,2,"));
    assert!(lines[2].starts_with("2000,2,"));
    // Timings grow with size; a generous slack keeps this stable on noisy
    // machines.
    let mean_of = |line: &str| line.split(',').nth(2).unwrap().parse::<f64>().unwrap();
    assert!(mean_of(lines[2]) >= 0.5 * mean_of(lines[1]));
}

#[test]
fn compare_without_source_reports_generator_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    run(&[
        "compare", "--sizes", "150", "--seeds", "1,2", "--seed", "1",
        "--out", out.to_str().unwrap(),
    ])
    .unwrap();
    let text = std::fs::read_to_string(out.join("compare_runs.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.contains(",generator,")));
    let summary = std::fs::read_to_string(out.join("compare_summary.csv")).unwrap();
    assert!(summary.lines().any(|l| l.starts_with("150,generator,2,")));
}

#[test]
fn unknown_method_and_bad_flags_error_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.csv");
    std::fs::write(&edges, "a,b\n").unwrap();
    let err = run(&[
        "sample", "--method", "teleport", "--target", "1", "--in",
        edges.to_str().unwrap(), "--out", dir.path().join("x.csv").to_str().unwrap(),
    ])
    .unwrap_err();
    assert!(err.to_string().contains("unknown sampling method"));

    let err = run(&["metrics", "--in", "/definitely/not/there.csv"]).unwrap_err();
    assert!(matches!(err, homonet::Error::Io { .. }));
}
