//! Window features in the joint fractional domain plus seeded k-means.

use ndarray::{Array1, Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gfrt::GftOperator;
use crate::joint::{jfrt_forward, FractionalOrderPair};
use crate::window::WindowedSequence;

/// One feature row per window: the transformed window of every coordinate
/// dimension, magnitudes taken, flattened row-major and concatenated. Feature
/// length is `dims * N * W`.
pub fn jfrt_features(
    seqs: &[WindowedSequence],
    g: &GftOperator,
    order: FractionalOrderPair,
) -> Result<Array2<f64>> {
    let first = seqs.first().ok_or_else(|| {
        Error::InvalidParameter("at least one windowed sequence is required".into())
    })?;
    let (count, n, w) = (first.n_windows(), first.n_vertices(), first.window_length);
    for seq in seqs {
        if seq.n_windows() != count || seq.n_vertices() != n || seq.window_length != w {
            return Err(Error::GeometryMismatch);
        }
    }
    let mut features = Array2::zeros((count, seqs.len() * n * w));
    for (d, seq) in seqs.iter().enumerate() {
        for (i, window) in seq.windows.iter().enumerate() {
            let transformed = jfrt_forward(window, g, order)?;
            let mut col = d * n * w;
            for v in transformed.values.iter() {
                features[[i, col]] = v.norm();
                col += 1;
            }
        }
    }
    Ok(features)
}

#[derive(Debug, Clone)]
pub struct KmeansResult {
    pub assignments: Vec<usize>,
    pub wcss: f64,
}

fn sq_dist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest_center(point: ArrayView1<f64>, centers: &Array2<f64>) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.outer_iter().enumerate() {
        let d = sq_dist(point, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn seed_centers(points: &Array2<f64>, k: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let n = points.nrows();
    let mut centers = Array2::zeros((k, points.ncols()));
    let first = rng.random_range(0..n);
    centers.row_mut(0).assign(&points.row(first));
    let mut d2 = Array1::from_shape_fn(n, |i| sq_dist(points.row(i), centers.row(0)));
    for c in 1..k {
        let total: f64 = d2.sum();
        let idx = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                target -= w;
                if target <= 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centers.row_mut(c).assign(&points.row(idx));
        for i in 0..n {
            let d = sq_dist(points.row(i), centers.row(c));
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centers
}

fn lloyd(points: &Array2<f64>, centers: &mut Array2<f64>) -> (Vec<usize>, f64) {
    let n = points.nrows();
    let k = centers.nrows();
    let mut assignments = vec![0usize; n];
    for _ in 0..100 {
        let mut changed = false;
        for i in 0..n {
            let (c, _) = nearest_center(points.row(i), centers);
            if assignments[i] != c {
                assignments[i] = c;
                changed = true;
            }
        }
        // An emptied cluster adopts the point farthest from its own center.
        let mut counts = vec![0usize; k];
        for &a in &assignments {
            counts[a] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| counts[assignments[i]] > 1)
                .max_by(|&a, &b| {
                    sq_dist(points.row(a), centers.row(assignments[a]))
                        .total_cmp(&sq_dist(points.row(b), centers.row(assignments[b])))
                });
            if let Some(i) = far {
                counts[assignments[i]] -= 1;
                assignments[i] = c;
                counts[c] = 1;
                changed = true;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                continue;
            }
            let mut mean = Array1::zeros(points.ncols());
            for i in 0..n {
                if assignments[i] == c {
                    mean += &points.row(i);
                }
            }
            mean /= counts[c] as f64;
            centers.row_mut(c).assign(&mean);
        }
        if !changed {
            break;
        }
    }
    let wcss = (0..n)
        .map(|i| sq_dist(points.row(i), centers.row(assignments[i])))
        .sum();
    (assignments, wcss)
}

/// Lloyd's algorithm with greedy distance-squared seeding, best of `n_init`
/// restarts by within-cluster sum of squares. Deterministic given the seed.
pub fn kmeans(points: &Array2<f64>, k: usize, seed: u64, n_init: usize) -> Result<KmeansResult> {
    if k == 0 || n_init == 0 {
        return Err(Error::InvalidParameter(
            "cluster count and restart count must be positive".into(),
        ));
    }
    if points.nrows() < k {
        return Err(Error::TooFewPoints { needed: k, got: points.nrows() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KmeansResult> = None;
    for _ in 0..n_init {
        let mut centers = seed_centers(points, k, &mut rng);
        let (assignments, wcss) = lloyd(points, &mut centers);
        if best.as_ref().is_none_or(|b| wcss < b.wcss) {
            best = Some(KmeansResult { assignments, wcss });
        }
    }
    Ok(best.unwrap())
}

fn canonical_labels(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = Vec::new();
    let canon = labels
        .iter()
        .map(|&l| {
            if let Some(pos) = map.iter().position(|&m| m == l) {
                pos
            } else {
                map.push(l);
                map.len() - 1
            }
        })
        .collect();
    (canon, map.len())
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn rec(k: usize, current: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(k, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(k, &mut current, &mut used, &mut out);
    out
}

/// Fraction of windows matching the ground truth under the best relabeling
/// of cluster ids. Exhaustive over permutations, so at most 8 labels.
pub fn clustering_accuracy(assignments: &[usize], ground_truth: &[usize]) -> Result<f64> {
    if assignments.len() != ground_truth.len() {
        return Err(Error::DimensionMismatch {
            context: "clustering accuracy",
            expected: (ground_truth.len(), 1),
            got: (assignments.len(), 1),
        });
    }
    if assignments.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let (a, ka) = canonical_labels(assignments);
    let (b, kb) = canonical_labels(ground_truth);
    let k = ka.max(kb);
    if k > 8 {
        return Err(Error::TooManyLabels { got: k });
    }
    let mut best = 0usize;
    for perm in permutations(k) {
        let matches = a.iter().zip(b.iter()).filter(|&(&x, &y)| perm[x] == y).count();
        best = best.max(matches);
    }
    Ok(best as f64 / a.len() as f64)
}

/// Ground-truth label per window: the most common per-sample label inside
/// the window's time span, lowest label winning ties.
pub fn window_majority_labels(sample_labels: &[usize], seq: &WindowedSequence) -> Result<Vec<usize>> {
    let needed = (seq.n_windows().saturating_sub(1)) * seq.step + seq.window_length;
    if sample_labels.len() < needed {
        return Err(Error::DimensionMismatch {
            context: "window majority labels",
            expected: (needed, 1),
            got: (sample_labels.len(), 1),
        });
    }
    let mut out = Vec::with_capacity(seq.n_windows());
    for i in 0..seq.n_windows() {
        let span = &sample_labels[i * seq.step..i * seq.step + seq.window_length];
        let max_label = *span.iter().max().unwrap();
        let mut counts = vec![0usize; max_label + 1];
        for &l in span {
            counts[l] += 1;
        }
        let majority = counts
            .iter()
            .enumerate()
            .max_by(|(ia, ca), (ib, cb)| ca.cmp(cb).then(ib.cmp(ia)))
            .unwrap()
            .0;
        out.push(majority);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfrt::gft_from_laplacian;
    use crate::graph::{laplacian, ring_graph};
    use crate::joint::JointSignal;
    use crate::window::window_signal;
    use approx::assert_abs_diff_eq;
    use ndarray::Array2;
    use num_complex::Complex64;

    fn windowed(n: usize, t: usize, w: usize) -> WindowedSequence {
        let x = JointSignal::new(Array2::from_shape_fn((n, t), |(i, j)| {
            Complex64::new(((i * 3 + j) as f64 * 0.7).sin(), ((j + 1) as f64 * 0.2).cos())
        }));
        window_signal(&x, w, 0.5).unwrap()
    }

    #[test]
    fn identity_order_features_are_window_magnitudes() {
        let seq = windowed(4, 12, 4);
        let g = gft_from_laplacian(&laplacian(&ring_graph(4).unwrap()).unwrap()).unwrap();
        let f = jfrt_features(
            std::slice::from_ref(&seq),
            &g,
            FractionalOrderPair { alpha: 0.0, beta: 0.0 },
        )
        .unwrap();
        assert_eq!(f.shape(), &[seq.n_windows(), 4 * 4]);
        for (i, window) in seq.windows.iter().enumerate() {
            for (col, v) in window.values.iter().enumerate() {
                assert_abs_diff_eq!(f[[i, col]], v.norm(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn feature_length_scales_with_dimensions() {
        let seq = windowed(4, 12, 4);
        let g = gft_from_laplacian(&laplacian(&ring_graph(4).unwrap()).unwrap()).unwrap();
        let seqs = vec![seq.clone(), seq.clone(), seq];
        let f = jfrt_features(&seqs, &g, FractionalOrderPair { alpha: 0.5, beta: 0.5 }).unwrap();
        assert_eq!(f.ncols(), 3 * 4 * 4);
    }

    #[test]
    fn unitary_features_preserve_window_energy() {
        let seq = windowed(5, 20, 6);
        let g = gft_from_laplacian(&laplacian(&ring_graph(5).unwrap()).unwrap()).unwrap();
        let f = jfrt_features(
            std::slice::from_ref(&seq),
            &g,
            FractionalOrderPair { alpha: 0.905, beta: 1.3 },
        )
        .unwrap();
        for (i, window) in seq.windows.iter().enumerate() {
            let feat_norm = f.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
            assert_abs_diff_eq!(feat_norm, window.fro_norm(), epsilon = 1e-8);
        }
    }

    #[test]
    fn mismatched_window_geometry_is_rejected() {
        let a = windowed(4, 12, 4);
        let b = windowed(4, 12, 6);
        let g = gft_from_laplacian(&laplacian(&ring_graph(4).unwrap()).unwrap()).unwrap();
        assert!(matches!(
            jfrt_features(&[a, b], &g, FractionalOrderPair { alpha: 0.0, beta: 0.0 }),
            Err(Error::GeometryMismatch)
        ));
    }

    #[test]
    fn separated_clouds_split_perfectly() {
        let mut pts = Array2::zeros((20, 2));
        for i in 0..10 {
            pts[[i, 0]] = 0.01 * i as f64;
            pts[[i, 1]] = 0.02 * (i % 3) as f64;
            pts[[10 + i, 0]] = 100.0 + 0.01 * i as f64;
            pts[[10 + i, 1]] = 100.0 + 0.02 * (i % 4) as f64;
        }
        let result = kmeans(&pts, 2, 7, 4).unwrap();
        let truth: Vec<usize> = (0..20).map(|i| usize::from(i >= 10)).collect();
        assert_abs_diff_eq!(clustering_accuracy(&result.assignments, &truth).unwrap(), 1.0);
    }

    #[test]
    fn one_cluster_per_point_has_zero_wcss() {
        let mut pts = Array2::zeros((5, 2));
        for i in 0..5 {
            pts[[i, 0]] = i as f64 * 3.0;
            pts[[i, 1]] = (i as f64).powi(2);
        }
        let result = kmeans(&pts, 5, 1, 3).unwrap();
        let mut seen = result.assignments.clone();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3, 4]);
        assert!(result.wcss < 1e-20);
    }

    #[test]
    fn kmeans_is_deterministic() {
        let pts = Array2::from_shape_fn((30, 3), |(i, j)| {
            ((i * 7 + j * 13) as f64 * 0.37).sin() * 5.0
        });
        let a = kmeans(&pts, 3, 99, 5).unwrap();
        let b = kmeans(&pts, 3, 99, 5).unwrap();
        assert_eq!(a.assignments, b.assignments);
        assert_eq!(a.wcss, b.wcss);
    }

    #[test]
    fn too_few_points_is_rejected() {
        let pts = Array2::zeros((2, 2));
        assert!(matches!(
            kmeans(&pts, 3, 0, 1),
            Err(Error::TooFewPoints { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn accuracy_of_identical_and_permuted_labelings() {
        let truth = vec![0, 0, 1, 1, 2, 2];
        assert_abs_diff_eq!(clustering_accuracy(&truth, &truth).unwrap(), 1.0);
        let swapped = vec![2, 2, 0, 0, 1, 1];
        assert_abs_diff_eq!(clustering_accuracy(&swapped, &truth).unwrap(), 1.0);
    }

    #[test]
    fn one_class_fully_misassigned() {
        let mut truth = Vec::new();
        let mut assign = Vec::new();
        for class in 0..3usize {
            for _ in 0..9 {
                truth.push(class);
                assign.push(if class == 2 { 0 } else { class });
            }
        }
        assert_abs_diff_eq!(
            clustering_accuracy(&assign, &truth).unwrap(),
            18.0 / 27.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn too_many_labels_is_rejected() {
        let labels: Vec<usize> = (0..9).collect();
        assert!(matches!(
            clustering_accuracy(&labels, &labels),
            Err(Error::TooManyLabels { got: 9 })
        ));
    }

    #[test]
    fn majority_labels_follow_regimes() {
        let x = JointSignal::new(Array2::from_elem((2, 30), Complex64::new(1.0, 0.0)));
        let seq = window_signal(&x, 10, 0.5).unwrap();
        // Labels: 12 zeros then 18 ones; windows start at 0,5,10,15,20.
        let labels: Vec<usize> = (0..30).map(|t| usize::from(t >= 12)).collect();
        let majority = window_majority_labels(&labels, &seq).unwrap();
        assert_eq!(majority, vec![0, 0, 1, 1, 1]);
    }
}
