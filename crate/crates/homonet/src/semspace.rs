//! Semantic homophily space.
//!
//! Categorical labels get rank-based semantic indices from an ordered list
//! (bundled, or rebuilt from a similarity table via average-linkage
//! hierarchical clustering). Profiles are projected into a weighted vector
//! space of `interest slots + 3` dimensions, and a k-d tree answers exact
//! nearest-neighbor queries over the projection.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use crate::attrgen::NodeProfile;
use crate::error::{Error, Result};
use crate::rng;

/// Ordered label list with rank-based normalized indices.
#[derive(Debug, Clone)]
pub struct SemanticMap {
    labels: Vec<String>,
    ranks: HashMap<String, usize>,
}

impl SemanticMap {
    pub fn from_order(labels: Vec<String>) -> Result<Self> {
        let mut ranks = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if ranks.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(SemanticMap { labels, ranks })
    }

    /// One label per line, file order = semantic order.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let labels = text
            .lines()
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect();
        Self::from_order(labels)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        for label in &self.labels {
            writeln!(w, "{label}").map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self, label: &str) -> Option<usize> {
        self.ranks.get(label).copied()
    }

    /// Rank normalized to [0,1]: `rank / (count - 1)`, or 0 for a singleton.
    pub fn index(&self, label: &str) -> Option<f64> {
        let rank = self.rank(label)?;
        Some(if self.labels.len() > 1 {
            rank as f64 / (self.labels.len() - 1) as f64
        } else {
            0.0
        })
    }
}

/// Order labels by average-linkage hierarchical clustering over the
/// distance table `1 - similarity`. The leaf order of the dendrogram is the
/// semantic order; ties merge the pair with the lowest original indices,
/// lower-index cluster first.
pub fn build_semantic_map(labels: &[String], similarity: &[Vec<f64>]) -> Result<SemanticMap> {
    let n = labels.len();
    if similarity.len() != n || similarity.iter().any(|row| row.len() != n) {
        return Err(Error::BadSimilarityTable);
    }
    for (i, row) in similarity.iter().enumerate() {
        if (row[i] - 1.0).abs() > 1e-9 {
            return Err(Error::BadSimilarityTable);
        }
        for (j, value) in row.iter().enumerate() {
            if (value - similarity[j][i]).abs() > 1e-9 {
                return Err(Error::BadSimilarityTable);
            }
        }
    }
    if n == 0 {
        return SemanticMap::from_order(Vec::new());
    }

    // Each cluster: (id = min original index, members in leaf order).
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    while clusters.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let mut sum = 0.0;
                for &i in &clusters[a].1 {
                    for &j in &clusters[b].1 {
                        sum += 1.0 - similarity[i][j];
                    }
                }
                let avg = sum / (clusters[a].1.len() * clusters[b].1.len()) as f64;
                let (lo, hi) = if clusters[a].0 < clusters[b].0 {
                    (clusters[a].0, clusters[b].0)
                } else {
                    (clusters[b].0, clusters[a].0)
                };
                let better = match &best {
                    None => true,
                    Some((d, l, h)) => {
                        avg < d - 1e-15
                            || ((avg - d).abs() <= 1e-15 && (lo, hi) < (*l, *h))
                    }
                };
                if better {
                    best = Some((avg, lo, hi));
                }
            }
        }
        let (_, lo_id, hi_id) = best.expect("at least one pair");
        let a = clusters.iter().position(|c| c.0 == lo_id).unwrap();
        let b = clusters.iter().position(|c| c.0 == hi_id).unwrap();
        let (keep, merge) = if a < b {
            let merged = clusters.remove(b);
            (a, merged)
        } else {
            let merged = clusters.remove(a);
            (b, merged)
        };
        // Lower original index first in the leaf order.
        if clusters[keep].0 < merge.0 {
            clusters[keep].1.extend(merge.1);
        } else {
            let mut members = merge.1;
            members.append(&mut clusters[keep].1);
            clusters[keep].1 = members;
            clusters[keep].0 = merge.0;
        }
    }

    let order: Vec<String> = clusters[0].1.iter().map(|&i| labels[i].clone()).collect();
    SemanticMap::from_order(order)
}

/// Row-major projection matrix; row `i` is the weighted semantic vector of
/// node `i` with layout `[age, occupation, interests.., random]`.
#[derive(Debug, Clone)]
pub struct ProjectionMatrix {
    data: Vec<f64>,
    rows: usize,
    dims: usize,
    interest_slots: usize,
}

impl ProjectionMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn interest_slots(&self) -> usize {
        self.interest_slots
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dims..(i + 1) * self.dims]
    }

    /// Euclidean distance between two rows.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(self.row(i), self.row(j))
    }

    /// Debug CSV dump with header `id,A,O,I1..Ik,R`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let mut header = String::from("id,A,O");
        for k in 1..=self.interest_slots {
            header.push_str(&format!(",I{k}"));
        }
        header.push_str(",R");
        writeln!(w, "{header}").map_err(|e| Error::io(path, e))?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            writeln!(w, "{i},{}", cells.join(",")).map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = x - y;
        sum += d * d;
    }
    sum.sqrt()
}

const AGE_SPAN: f64 = 80.0;

/// Project profiles into the homophily space.
///
/// Row layout: min-max normalized age over [0,80], normalized occupation
/// index, interest indices in profile order zero-padded to the cohort-wide
/// maximum interest count, and a uniform random component from the node's
/// own stream; the whole vector is multiplied element-wise by `weights`.
pub fn project_profiles(
    profiles: &[NodeProfile],
    occupation_map: &SemanticMap,
    interest_map: &SemanticMap,
    weights: Option<&[f64]>,
    seed: u64,
) -> Result<ProjectionMatrix> {
    let interest_slots = profiles.iter().map(|p| p.interests.len()).max().unwrap_or(0);
    let dims = interest_slots + 3;
    if let Some(w) = weights {
        if w.len() != dims {
            return Err(Error::Config(format!(
                "projection weights have length {}, expected {dims}",
                w.len()
            )));
        }
    }
    let ones = vec![1.0; dims];
    let w = weights.unwrap_or(&ones);

    let rows: Vec<Vec<f64>> = profiles
        .par_iter()
        .map(|p| -> Result<Vec<f64>> {
            let mut row = Vec::with_capacity(dims);
            row.push(p.age as f64 / AGE_SPAN);
            let occ = occupation_map.index(&p.occupation).ok_or_else(|| Error::UnknownLabel {
                label: p.occupation.clone(),
                node: p.id as usize,
            })?;
            row.push(occ);
            for label in &p.interests {
                let idx = interest_map.index(label).ok_or_else(|| Error::UnknownLabel {
                    label: label.clone(),
                    node: p.id as usize,
                })?;
                row.push(idx);
            }
            row.resize(2 + interest_slots, 0.0);
            let mut node_rng = rng::stream(seed, "projection", p.id as u64);
            row.push(node_rng.gen::<f64>());
            for (value, weight) in row.iter_mut().zip(w.iter()) {
                *value *= weight;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut data = Vec::with_capacity(profiles.len() * dims);
    for row in rows {
        data.extend(row);
    }
    Ok(ProjectionMatrix { data, rows: profiles.len(), dims, interest_slots })
}

const LEAF_SIZE: usize = 16;

enum KdNode {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: Box<KdNode>,
        right: Box<KdNode>,
    },
}

/// Exact k-d tree over the rows of a projection matrix.
pub struct SpatialIndex<'a> {
    matrix: &'a ProjectionMatrix,
    ids: Vec<u32>,
    root: KdNode,
}

impl<'a> SpatialIndex<'a> {
    pub fn build(matrix: &'a ProjectionMatrix) -> Self {
        let mut ids: Vec<u32> = (0..matrix.rows() as u32).collect();
        let root = build_node(matrix, &mut ids, 0);
        SpatialIndex { matrix, ids, root }
    }

    /// The `min(k, N-1)` nearest rows to row `query` (excluding itself),
    /// sorted by ascending distance with ties broken by lower id.
    pub fn knn(&self, query: usize, k: usize) -> Vec<(u32, f64)> {
        let k = k.min(self.matrix.rows().saturating_sub(1));
        if k == 0 {
            return Vec::new();
        }
        let q = self.matrix.row(query);
        let mut heap = BoundedHeap::new(k);
        search(&self.root, self.matrix, &self.ids, q, query as u32, &mut heap);
        let mut out: Vec<(u32, f64)> = heap
            .items
            .into_iter()
            .map(|(d2, id)| (id, d2.sqrt()))
            .collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }
}

fn build_node(matrix: &ProjectionMatrix, ids: &mut [u32], offset: usize) -> KdNode {
    if ids.len() <= LEAF_SIZE {
        return KdNode::Leaf { start: offset, end: offset + ids.len() };
    }
    // Split on the axis with maximum spread, lowest axis on ties.
    let dims = matrix.dims();
    let mut best_axis = 0;
    let mut best_spread = -1.0;
    for axis in 0..dims {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &id in ids.iter() {
            let v = matrix.row(id as usize)[axis];
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let spread = hi - lo;
        if spread > best_spread {
            best_spread = spread;
            best_axis = axis;
        }
    }
    let mid = ids.len() / 2;
    ids.select_nth_unstable_by(mid, |&a, &b| {
        let va = matrix.row(a as usize)[best_axis];
        let vb = matrix.row(b as usize)[best_axis];
        va.total_cmp(&vb).then(a.cmp(&b))
    });
    let value = matrix.row(ids[mid] as usize)[best_axis];
    let (left_ids, right_ids) = ids.split_at_mut(mid);
    let left = Box::new(build_node(matrix, left_ids, offset));
    let right = Box::new(build_node(matrix, right_ids, offset + mid));
    KdNode::Split { axis: best_axis, value, left, right }
}

/// Fixed-capacity max-heap over `(dist^2, id)` with lexicographic ordering,
/// so that among equal distances lower ids win.
struct BoundedHeap {
    cap: usize,
    items: Vec<(f64, u32)>,
}

impl BoundedHeap {
    fn new(cap: usize) -> Self {
        BoundedHeap { cap, items: Vec::with_capacity(cap) }
    }

    fn worst(&self) -> Option<(f64, u32)> {
        self.items.first().copied()
    }

    fn full(&self) -> bool {
        self.items.len() == self.cap
    }

    fn push(&mut self, d2: f64, id: u32) {
        if self.items.len() < self.cap {
            self.items.push((d2, id));
            let mut i = self.items.len() - 1;
            while i > 0 {
                let parent = (i - 1) / 2;
                if cmp_key(self.items[i], self.items[parent]) == std::cmp::Ordering::Greater {
                    self.items.swap(i, parent);
                    i = parent;
                } else {
                    break;
                }
            }
        } else if cmp_key((d2, id), self.items[0]) == std::cmp::Ordering::Less {
            self.items[0] = (d2, id);
            let mut i = 0;
            loop {
                let (l, r) = (2 * i + 1, 2 * i + 2);
                let mut largest = i;
                if l < self.items.len()
                    && cmp_key(self.items[l], self.items[largest]) == std::cmp::Ordering::Greater
                {
                    largest = l;
                }
                if r < self.items.len()
                    && cmp_key(self.items[r], self.items[largest]) == std::cmp::Ordering::Greater
                {
                    largest = r;
                }
                if largest == i {
                    break;
                }
                self.items.swap(i, largest);
                i = largest;
            }
        }
    }
}

fn cmp_key(a: (f64, u32), b: (f64, u32)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

fn search(
    node: &KdNode,
    matrix: &ProjectionMatrix,
    ids: &[u32],
    q: &[f64],
    exclude: u32,
    heap: &mut BoundedHeap,
) {
    match node {
        KdNode::Leaf { start, end } => {
            for &id in &ids[*start..*end] {
                if id == exclude {
                    continue;
                }
                let row = matrix.row(id as usize);
                let mut d2 = 0.0;
                for (x, y) in row.iter().zip(q.iter()) {
                    let d = x - y;
                    d2 += d * d;
                }
                heap.push(d2, id);
            }
        }
        KdNode::Split { axis, value, left, right } => {
            let diff = q[*axis] - value;
            let (near, far) = if diff <= 0.0 { (left, right) } else { (right, left) };
            search(near, matrix, ids, q, exclude, heap);
            let plane_d2 = diff * diff;
            let visit_far = match heap.worst() {
                Some((worst, _)) if heap.full() => plane_d2 <= worst,
                _ => true,
            };
            if visit_far {
                search(far, matrix, ids, q, exclude, heap);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Catalogs, GeneratorConfig};
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;

    fn toy_matrix(points: &[Vec<f64>]) -> ProjectionMatrix {
        let dims = points[0].len();
        let mut data = Vec::new();
        for p in points {
            assert_eq!(p.len(), dims);
            data.extend(p.iter().copied());
        }
        ProjectionMatrix {
            data,
            rows: points.len(),
            dims,
            interest_slots: dims.saturating_sub(3),
        }
    }

    fn brute_force_knn(points: &[Vec<f64>], query: usize, k: usize) -> Vec<(u32, f64)> {
        let mut all: Vec<(u32, f64)> = points
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != query)
            .map(|(i, p)| (i as u32, euclidean(p, &points[query])))
            .collect();
        all.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        all.truncate(k);
        all
    }

    #[test]
    fn singleton_semantic_map_normalizes_to_zero() {
        let map = SemanticMap::from_order(vec!["X".into()]).unwrap();
        assert_eq!(map.index("X"), Some(0.0));
    }

    #[test]
    fn three_label_normalization() {
        let map = SemanticMap::from_order(vec!["A".into(), "B".into(), "C".into()]).unwrap();
        assert_eq!(map.index("A"), Some(0.0));
        assert_eq!(map.index("B"), Some(0.5));
        assert_eq!(map.index("C"), Some(1.0));
        assert_eq!(map.index("Z"), None);
    }

    #[test]
    fn duplicate_label_is_a_load_error() {
        assert!(SemanticMap::from_order(vec!["A".into(), "A".into()]).is_err());
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("order.txt");
        let map = SemanticMap::from_order(vec!["A".into(), "B".into(), "C".into()]).unwrap();
        map.save(&path).unwrap();
        let back = SemanticMap::load(&path).unwrap();
        assert_eq!(map.labels(), back.labels());
    }

    #[test]
    fn clustering_places_similar_labels_adjacent() {
        let labels: Vec<String> = vec!["A".into(), "B".into(), "C".into()];
        let sim = vec![
            vec![1.0, 0.9, 0.1],
            vec![0.9, 1.0, 0.1],
            vec![0.1, 0.1, 1.0],
        ];
        let map = build_semantic_map(&labels, &sim).unwrap();
        let ra = map.rank("A").unwrap() as i64;
        let rb = map.rank("B").unwrap() as i64;
        assert_eq!((ra - rb).abs(), 1, "A and B must be adjacent: {:?}", map.labels());
    }

    #[test]
    fn clustering_rejects_bad_tables() {
        let labels: Vec<String> = vec!["A".into(), "B".into()];
        assert!(build_semantic_map(&labels, &[vec![1.0, 0.5]]).is_err());
        let asym = vec![vec![1.0, 0.5], vec![0.4, 1.0]];
        assert!(build_semantic_map(&labels, &asym).is_err());
    }

    #[test]
    fn bundled_occupation_ordering_is_semantic() {
        let catalogs = Catalogs::embedded();
        let map = SemanticMap::from_order(catalogs.occupation_order.clone()).unwrap();
        let engineer = map.rank("Engineer").unwrap() as i64;
        let technician = map.rank("Technician").unwrap() as i64;
        let artist = map.rank("Artist").unwrap() as i64;
        assert_eq!((engineer - technician).abs(), 1);
        assert!((artist - engineer).abs() > 10);
    }

    fn setup_profiles(n: usize, seed: u64) -> (Vec<NodeProfile>, SemanticMap, SemanticMap) {
        let catalogs = Catalogs::embedded();
        let config = GeneratorConfig::default_config(&catalogs).unwrap();
        let profiles = crate::attrgen::generate_profiles(n, &config, &catalogs, seed).unwrap();
        let occ = SemanticMap::from_order(catalogs.occupation_order.clone()).unwrap();
        let int = SemanticMap::from_order(catalogs.interest_order.clone()).unwrap();
        (profiles, occ, int)
    }

    #[test]
    fn zero_weights_annihilate_projection() {
        let (profiles, occ, int) = setup_profiles(20, 1);
        let slots = profiles.iter().map(|p| p.interests.len()).max().unwrap();
        let w = vec![0.0; slots + 3];
        let m = project_profiles(&profiles, &occ, &int, Some(&w), 1).unwrap();
        for i in 0..m.rows() {
            assert!(m.row(i).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn age_endpoints_normalize_to_unit_interval() {
        let (mut profiles, occ, int) = setup_profiles(2, 2);
        profiles[0].age = 80;
        profiles[0].occupation = "Retired".into();
        profiles[1].age = 0;
        profiles[1].occupation = "Student".into();
        let m = project_profiles(&profiles, &occ, &int, None, 2).unwrap();
        assert_eq!(m.row(0)[0], 1.0);
        assert_eq!(m.row(1)[0], 0.0);
    }

    #[test]
    fn short_interest_lists_are_zero_padded() {
        let (mut profiles, occ, int) = setup_profiles(2, 3);
        profiles[0].interests = vec!["Technology".into(), "Sports".into()];
        profiles[1].interests = (0..5).map(|i| int.labels()[i].clone()).collect();
        let m = project_profiles(&profiles, &occ, &int, None, 3).unwrap();
        assert_eq!(m.interest_slots(), 5);
        assert_eq!(m.dims(), 8);
        // Node 0 has 2 interests; slots 3..5 (row positions 4..7) are zero.
        let row = m.row(0);
        assert_eq!(&row[4..7], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn unknown_label_error_names_label_and_node() {
        let (mut profiles, occ, int) = setup_profiles(3, 4);
        profiles[2].occupation = "Wizard".into();
        let err = project_profiles(&profiles, &occ, &int, None, 4).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("Wizard") && msg.contains('2'), "{msg}");
    }

    #[test]
    fn identical_attributes_differ_only_in_random_component() {
        let (mut profiles, occ, int) = setup_profiles(2, 5);
        profiles[1].age = profiles[0].age;
        profiles[1].occupation = profiles[0].occupation.clone();
        profiles[1].interests = profiles[0].interests.clone();
        let m = project_profiles(&profiles, &occ, &int, None, 5).unwrap();
        let (a, b) = (m.row(0), m.row(1));
        let d = m.dims();
        assert_eq!(&a[..d - 1], &b[..d - 1]);
        assert_ne!(a[d - 1], b[d - 1]);
    }

    #[test]
    fn two_point_knn_is_the_other_node() {
        let m = toy_matrix(&[vec![0.0, 0.0], vec![3.0, 4.0]]);
        let index = SpatialIndex::build(&m);
        let res = index.knn(0, 5);
        assert_eq!(res.len(), 1);
        assert_eq!(res[0].0, 1);
        assert!((res[0].1 - 5.0).abs() < 1e-15);
    }

    #[test]
    fn duplicate_coordinates_prefer_lower_id() {
        let m = toy_matrix(&[vec![0.0], vec![1.0], vec![1.0], vec![1.0]]);
        let index = SpatialIndex::build(&m);
        let res = index.knn(0, 2);
        assert_eq!(res.iter().map(|r| r.0).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn knn_matches_brute_force_on_random_instances() {
        let mut rng = stream(6, "knn", 0);
        for case in 0..200 {
            let n = rng.gen_range(2..=100);
            let d = rng.gen_range(1..=8);
            let points: Vec<Vec<f64>> =
                (0..n).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect();
            let m = toy_matrix(&points);
            let index = SpatialIndex::build(&m);
            let k = rng.gen_range(1..=10);
            let q = rng.gen_range(0..n);
            let got = index.knn(q, k);
            let want = brute_force_knn(&points, q, k);
            assert_eq!(got, want, "case {case}: n={n} d={d} k={k} q={q}");
        }
    }

    proptest! {
        #[test]
        fn all_ones_projection_stays_in_unit_box(seed in 0u64..500) {
            let (profiles, occ, int) = setup_profiles(30, seed);
            let m = project_profiles(&profiles, &occ, &int, None, seed).unwrap();
            for i in 0..m.rows() {
                prop_assert!(m.row(i).iter().all(|&v| (0.0..=1.0).contains(&v)));
            }
        }

        #[test]
        fn scaling_weights_scales_distances_and_keeps_knn_order(
            seed in 0u64..200,
            scale in 0.1f64..10.0,
        ) {
            let (profiles, occ, int) = setup_profiles(25, seed);
            let slots = profiles.iter().map(|p| p.interests.len()).max().unwrap();
            let base = vec![1.0; slots + 3];
            let scaled: Vec<f64> = base.iter().map(|w| w * scale).collect();
            let m1 = project_profiles(&profiles, &occ, &int, Some(&base), seed).unwrap();
            let m2 = project_profiles(&profiles, &occ, &int, Some(&scaled), seed).unwrap();
            let i1 = SpatialIndex::build(&m1);
            let i2 = SpatialIndex::build(&m2);
            for q in 0..m1.rows() {
                let r1 = i1.knn(q, 5);
                let r2 = i2.knn(q, 5);
                let ids1: Vec<u32> = r1.iter().map(|r| r.0).collect();
                let ids2: Vec<u32> = r2.iter().map(|r| r.0).collect();
                prop_assert_eq!(ids1, ids2);
                for (a, b) in r1.iter().zip(r2.iter()) {
                    prop_assert!((a.1 * scale - b.1).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn projection_csv_has_expected_header() {
        let (profiles, occ, int) = setup_profiles(4, 7);
        let m = project_profiles(&profiles, &occ, &int, None, 7).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("proj.csv");
        m.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("id,A,O,I1"));
        assert!(header.ends_with(",R"));
        assert_eq!(text.lines().count(), 5);
    }
}
