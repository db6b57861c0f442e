//! Graph representation, k-NN construction from coordinates, combinatorial
//! Laplacian, and the ring/circular graphs used for the time domain.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, SpectralBasis};

/// Edge weighting for k-NN graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Binary,
    /// `w = exp(-d^2 / sigma^2)` with `sigma` the mean k-th neighbor distance.
    Gaussian,
}

/// Distance on raw coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    /// Great-circle kilometers; points are `[lat, lon]` in degrees.
    Haversine,
}

#[derive(Debug, Clone)]
pub struct Graph {
    pub adjacency: ComplexMatrix,
    pub directed: bool,
    pub coords: Option<Vec<Vec<f64>>>,
}

impl Graph {
    /// Wraps a symmetric, nonnegative, zero-diagonal adjacency matrix.
    pub fn undirected(adjacency: ComplexMatrix) -> Result<Graph> {
        let (rows, cols) = adjacency.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        for ((i, j), z) in adjacency.indexed_iter() {
            let mirrored = adjacency[[j, i]];
            if z.im != 0.0 || z.re < 0.0 || *z != mirrored || (i == j && z.re != 0.0) {
                return Err(Error::NotUndirected);
            }
        }
        Ok(Graph {
            adjacency,
            directed: false,
            coords: None,
        })
    }

    pub fn directed(adjacency: ComplexMatrix) -> Result<Graph> {
        let (rows, cols) = adjacency.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        Ok(Graph {
            adjacency,
            directed: true,
            coords: None,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn with_coords(mut self, coords: Vec<Vec<f64>>) -> Graph {
        self.coords = Some(coords);
        self
    }
}

/// Combinatorial Laplacian `L = D - A` together with its eigenbasis.
#[derive(Debug, Clone)]
pub struct Laplacian {
    pub matrix: ComplexMatrix,
    pub basis: SpectralBasis,
}

/// `L = D - A` for an undirected graph, with row-sum degrees.
pub fn laplacian(g: &Graph) -> Result<Laplacian> {
    if g.directed {
        return Err(Error::NotUndirected);
    }
    let n = g.n_vertices();
    let mut matrix = g.adjacency.mapv(|z| -z);
    for m in 0..n {
        let degree: Complex64 = g.adjacency.row(m).iter().sum();
        matrix[[m, m]] = degree;
    }
    let basis = hermitian_eig(&matrix)?;
    if let Some(&min) = basis.values.first() {
        if min < -1e-10 {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    Ok(Laplacian { matrix, basis })
}

fn haversine_km(a: &[f64], b: &[f64]) -> f64 {
    let to_rad = std::f64::consts::PI / 180.0;
    let (lat1, lon1) = (a[0] * to_rad, a[1] * to_rad);
    let (lat2, lon2) = (b[0] * to_rad, b[1] * to_rad);
    let dlat = lat2 - lat1;
    let dlon = lon2 - lon1;
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * 6371.0 * h.sqrt().min(1.0).asin()
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Union-symmetrized k nearest neighbor graph.
pub fn build_knn_graph(coords: &[Vec<f64>], k: usize, mode: WeightMode) -> Result<Graph> {
    build_knn_graph_with(coords, k, mode, Metric::Euclidean)
}

pub fn build_knn_graph_with(
    coords: &[Vec<f64>],
    k: usize,
    mode: WeightMode,
    metric: Metric,
) -> Result<Graph> {
    let n = coords.len();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if n < k + 1 {
        return Err(Error::TooFewPoints { needed: k + 1, got: n });
    }
    let dims = coords[0].len();
    if dims == 0 || coords.iter().any(|p| p.len() != dims) {
        return Err(Error::InvalidParameter(
            "coordinate rows must share a nonzero dimension".into(),
        ));
    }
    if metric == Metric::Haversine && dims != 2 {
        return Err(Error::InvalidParameter(
            "haversine distance needs [lat, lon] coordinates".into(),
        ));
    }

    let mut lo = vec![f64::INFINITY; dims];
    let mut hi = vec![f64::NEG_INFINITY; dims];
    for p in coords {
        for d in 0..dims {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let bbox_diag: f64 = lo
        .iter()
        .zip(hi.iter())
        .map(|(l, h)| (h - l) * (h - l))
        .sum::<f64>()
        .sqrt();
    if bbox_diag == 0.0 {
        return Err(Error::DegenerateGeometry);
    }

    // Duplicate points would produce zero distances; nudge repeats by a
    // deterministic index-keyed jitter far below data scale.
    let mut points: Vec<Vec<f64>> = coords.to_vec();
    let mut seen: std::collections::HashMap<Vec<u64>, usize> = std::collections::HashMap::new();
    for i in 0..n {
        let key: Vec<u64> = points[i].iter().map(|x| x.to_bits()).collect();
        if seen.insert(key, i).is_some() {
            for d in 0..dims {
                let scale = (i * dims + d + 1) as f64 / (n * dims) as f64;
                points[i][d] += 1e-9 * bbox_diag * scale;
            }
        }
    }

    let dist = |a: usize, b: usize| -> f64 {
        match metric {
            Metric::Euclidean => euclidean(&points[a], &points[b]),
            Metric::Haversine => haversine_km(&points[a], &points[b]),
        }
    };

    let mut neighbor_lists: Vec<Vec<(f64, usize)>> = Vec::with_capacity(n);
    let mut kth_sum = 0.0;
    for i in 0..n {
        let mut ds: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| (dist(i, j), j))
            .collect();
        ds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        ds.truncate(k);
        kth_sum += ds[k - 1].0;
        neighbor_lists.push(ds);
    }
    let sigma = kth_sum / n as f64;

    let mut adjacency: ComplexMatrix = Array2::zeros((n, n));
    for (i, list) in neighbor_lists.iter().enumerate() {
        for &(d, j) in list {
            let w = match mode {
                WeightMode::Binary => 1.0,
                WeightMode::Gaussian => (-d * d / (sigma * sigma)).exp(),
            };
            adjacency[[i, j]] = Complex64::new(w, 0.0);
            adjacency[[j, i]] = Complex64::new(w, 0.0);
        }
    }

    Ok(Graph {
        adjacency,
        directed: false,
        coords: Some(coords.to_vec()),
    })
}

/// Undirected cycle: every vertex joined to its two ring neighbors.
pub fn ring_graph(t: usize) -> Result<Graph> {
    if t < 3 {
        return Err(Error::TooSmall { min: 3, got: t });
    }
    let mut adjacency: ComplexMatrix = Array2::zeros((t, t));
    for m in 0..t {
        adjacency[[m, (m + 1) % t]] = Complex64::new(1.0, 0.0);
        adjacency[[(m + 1) % t, m]] = Complex64::new(1.0, 0.0);
    }
    Graph::undirected(adjacency)
}

/// Directed cycle implementing the unit delay: `(A x)_m = x_{m-1 mod T}`.
pub fn directed_circular_graph(t: usize) -> Result<Graph> {
    if t < 2 {
        return Err(Error::TooSmall { min: 2, got: t });
    }
    let mut adjacency: ComplexMatrix = Array2::zeros((t, t));
    for m in 0..t {
        adjacency[[m, (m + t - 1) % t]] = Complex64::new(1.0, 0.0);
    }
    Graph::directed(adjacency)
}

/// Cyclic first-difference operator: `(G x)_m = x_m - x_{m-1 mod T}`.
/// Its Gram matrix `G^T G` is the ring-graph Laplacian.
pub fn time_gradient(t: usize) -> Result<ComplexMatrix> {
    if t < 2 {
        return Err(Error::TooSmall { min: 2, got: t });
    }
    let mut grad: ComplexMatrix = Array2::zeros((t, t));
    for m in 0..t {
        grad[[m, m]] = Complex64::new(1.0, 0.0);
        grad[[m, (m + t - 1) % t]] += Complex64::new(-1.0, 0.0);
    }
    Ok(grad)
}
