//! Joint time-vertex signals, the joint fractional transform, and the joint
//! fractional Laplacian.
//!
//! Signals are `N x T`: rows are vertices, columns are time samples. The
//! transform acts separably, `F_G^b X (F^a)^T`, which agrees with the
//! vectorized operator `F^a (x) F_G^b` under column-major vectorization.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frt::dfrt_matrix;
use crate::gfrt::{
    fractional_laplacian, fractional_time_laplacian, gfrt_matrix, FractionalLaplacian, GftOperator,
};
use crate::graph::Laplacian;
use crate::linalg::{kron_capped, kron_sum_capped, ComplexMatrix, DENSE_CAP};

/// Time and graph fractional orders `(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrderPair {
    pub alpha: f64,
    pub beta: f64,
}

impl FractionalOrderPair {
    pub fn new(alpha: f64, beta: f64) -> Result<FractionalOrderPair> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "fractional orders must be finite, got ({alpha}, {beta})"
            )));
        }
        Ok(FractionalOrderPair { alpha, beta })
    }

    pub fn negated(self) -> FractionalOrderPair {
        FractionalOrderPair {
            alpha: -self.alpha,
            beta: -self.beta,
        }
    }
}

/// An `N x T` complex signal: one row per vertex, one column per time sample.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSignal {
    pub values: ComplexMatrix,
}

impl JointSignal {
    pub fn new(values: ComplexMatrix) -> JointSignal {
        JointSignal { values }
    }

    pub fn from_real(values: &Array2<f64>) -> JointSignal {
        JointSignal {
            values: values.mapv(|x| Complex64::new(x, 0.0)),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_time(&self) -> usize {
        self.values.ncols()
    }

    pub fn fro_norm(&self) -> f64 {
        crate::linalg::fro_norm(&self.values)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }
}

fn check_signal_dims(x: &JointSignal, g: &GftOperator) -> Result<()> {
    if x.n_vertices() != g.n_vertices() {
        return Err(Error::DimensionMismatch {
            context: "joint transform",
            expected: (g.n_vertices(), x.n_time()),
            got: (x.n_vertices(), x.n_time()),
        });
    }
    if x.n_time() < 2 {
        return Err(Error::TooSmall {
            min: 2,
            got: x.n_time(),
        });
    }
    Ok(())
}

/// `JFT^{a,b}(X) = F_G^b X (F^a)^T`.
pub fn jfrt_forward(
    x: &JointSignal,
    g: &GftOperator,
    order: FractionalOrderPair,
) -> Result<JointSignal> {
    check_signal_dims(x, g)?;
    let fg = gfrt_matrix(g, order.beta);
    let fa = dfrt_matrix(x.n_time(), order.alpha)?;
    Ok(JointSignal::new(fg.dot(&x.values).dot(&fa.t())))
}

/// Inverse joint transform: forward at order `(-a, -b)`.
pub fn jfrt_inverse(
    y: &JointSignal,
    g: &GftOperator,
    order: FractionalOrderPair,
) -> Result<JointSignal> {
    jfrt_forward(y, g, order.negated())
}

/// The two transform factors of one order pair, with a dense Kronecker form
/// available below the materialization cap.
#[derive(Debug, Clone)]
pub struct JointOperator {
    pub order: FractionalOrderPair,
    pub gfrt: ComplexMatrix,
    pub frt: ComplexMatrix,
}

pub fn joint_operator(
    g: &GftOperator,
    t: usize,
    order: FractionalOrderPair,
) -> Result<JointOperator> {
    Ok(JointOperator {
        order,
        gfrt: gfrt_matrix(g, order.beta),
        frt: dfrt_matrix(t, order.alpha)?,
    })
}

impl JointOperator {
    /// Applies the separable transform to an `N x T` signal.
    pub fn apply(&self, x: &JointSignal) -> Result<JointSignal> {
        if x.n_vertices() != self.gfrt.nrows() || x.n_time() != self.frt.nrows() {
            return Err(Error::DimensionMismatch {
                context: "joint operator",
                expected: (self.gfrt.nrows(), self.frt.nrows()),
                got: (x.n_vertices(), x.n_time()),
            });
        }
        Ok(JointSignal::new(
            self.gfrt.dot(&x.values).dot(&self.frt.t()),
        ))
    }

    /// Dense `NT x NT` operator `F^a (x) F_G^b` acting on column-major
    /// vectorized signals. Refused above the dimension cap.
    pub fn materialize(&self) -> Result<ComplexMatrix> {
        self.materialize_capped(DENSE_CAP)
    }

    pub fn materialize_capped(&self, cap: usize) -> Result<ComplexMatrix> {
        kron_capped(&self.frt, &self.gfrt, cap)
    }
}

/// Kronecker-sum Laplacian `tw (L_T)_a (+) gw (L_G)_b` kept in separable
/// form; the weights are 1 for the plain joint Laplacian and the Tikhonov
/// `(tau_t, tau_g)` for the regularized one.
#[derive(Debug, Clone)]
pub struct JointFractionalLaplacian {
    pub order: FractionalOrderPair,
    pub time_part: FractionalLaplacian,
    pub graph_part: FractionalLaplacian,
    pub time_weight: f64,
    pub graph_weight: f64,
}

pub fn joint_fractional_laplacian(
    l_graph: &Laplacian,
    t: usize,
    order: FractionalOrderPair,
) -> Result<JointFractionalLaplacian> {
    weighted_joint_fractional_laplacian(l_graph, t, order, 1.0, 1.0)
}

pub(crate) fn weighted_joint_fractional_laplacian(
    l_graph: &Laplacian,
    t: usize,
    order: FractionalOrderPair,
    time_weight: f64,
    graph_weight: f64,
) -> Result<JointFractionalLaplacian> {
    let time_part = fractional_time_laplacian(t, order.alpha)?;
    let graph_part = fractional_laplacian(l_graph, order.beta)?;
    Ok(JointFractionalLaplacian {
        order,
        time_part,
        graph_part,
        time_weight,
        graph_weight,
    })
}

impl JointFractionalLaplacian {
    pub fn n_vertices(&self) -> usize {
        self.graph_part.matrix.nrows()
    }

    pub fn n_time(&self) -> usize {
        self.time_part.matrix.nrows()
    }

    /// `N x T` grid with entry `(m, n) = gw lambda_m^b + tw omega_n^a`,
    /// indexed like the transformed signal.
    pub fn joint_spectrum(&self) -> Array2<f64> {
        let n = self.n_vertices();
        let t = self.n_time();
        Array2::from_shape_fn((n, t), |(m, nn)| {
            self.graph_weight * self.graph_part.spectrum[m]
                + self.time_weight * self.time_part.spectrum[nn]
        })
    }

    /// Dense `NT x NT` Kronecker-sum matrix, refused above the cap.
    pub fn materialize(&self) -> Result<ComplexMatrix> {
        self.materialize_capped(DENSE_CAP)
    }

    pub fn materialize_capped(&self, cap: usize) -> Result<ComplexMatrix> {
        let tw = Complex64::new(self.time_weight, 0.0);
        let gw = Complex64::new(self.graph_weight, 0.0);
        let time = self.time_part.matrix.mapv(|z| z * tw);
        let graph = self.graph_part.matrix.mapv(|z| z * gw);
        kron_sum_capped(&time, &graph, cap)
    }
}

/// Quadratic form `vec(x)^H L_J vec(x)` evaluated separably:
/// `gw tr(X^H L_G X) + tw tr(X^H X L_T^T)`. The result must be real up to
/// roundoff; a larger imaginary residual is reported as an error.
pub fn joint_fractional_variation(x: &JointSignal, l: &JointFractionalLaplacian) -> Result<f64> {
    if x.n_vertices() != l.n_vertices() || x.n_time() != l.n_time() {
        return Err(Error::DimensionMismatch {
            context: "joint fractional variation",
            expected: (l.n_vertices(), l.n_time()),
            got: (x.n_vertices(), x.n_time()),
        });
    }
    let graph_term: Complex64 = {
        let lx = l.graph_part.matrix.dot(&x.values);
        x.values
            .iter()
            .zip(lx.iter())
            .map(|(xv, yv)| xv.conj() * yv)
            .sum()
    };
    let time_term: Complex64 = {
        let xl = x.values.dot(&l.time_part.matrix.t());
        x.values
            .iter()
            .zip(xl.iter())
            .map(|(xv, yv)| xv.conj() * yv)
            .sum()
    };
    let total = graph_term * Complex64::new(l.graph_weight, 0.0)
        + time_term * Complex64::new(l.time_weight, 0.0);
    let energy: f64 = x.values.iter().map(|z| z.norm_sqr()).sum();
    if total.im.abs() > 1e-10 * energy.max(1e-300) {
        return Err(Error::NonRealQuadraticForm {
            residual: total.im.abs(),
        });
    }
    Ok(total.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfrt::gft_from_laplacian;
    use crate::graph::{laplacian, ring_graph, Graph};
    use crate::linalg::{conj_transpose, fro_norm, identity};
    use approx::assert_abs_diff_eq;

    fn path_graph(n: usize) -> Graph {
        let mut a: ComplexMatrix = Array2::zeros((n, n));
        for i in 0..n - 1 {
            a[[i, i + 1]] = Complex64::new(1.0, 0.0);
            a[[i + 1, i]] = Complex64::new(1.0, 0.0);
        }
        Graph::undirected(a).unwrap()
    }

    fn test_signal(n: usize, t: usize) -> JointSignal {
        JointSignal::new(Array2::from_shape_fn((n, t), |(i, j)| {
            Complex64::new(
                ((i * 7 + j * 3) as f64 * 0.37).sin(),
                ((i + 2 * j) as f64 * 0.61).cos() * 0.5,
            )
        }))
    }

    #[test]
    fn order_zero_zero_is_identity() {
        let g = gft_from_laplacian(&laplacian(&path_graph(3)).unwrap()).unwrap();
        let x = test_signal(3, 4);
        let y = jfrt_forward(&x, &g, FractionalOrderPair { alpha: 0.0, beta: 0.0 }).unwrap();
        assert!(fro_norm(&(&y.values - &x.values)) < 1e-9);
    }

    #[test]
    fn order_one_one_matches_plain_jft() {
        let l = laplacian(&path_graph(4)).unwrap();
        let g = gft_from_laplacian(&l).unwrap();
        let x = test_signal(4, 5);
        let y = jfrt_forward(&x, &g, FractionalOrderPair { alpha: 1.0, beta: 1.0 }).unwrap();
        let f = crate::frt::dft_matrix(5);
        let direct = g.forward.dot(&x.values).dot(&f.t());
        assert!(fro_norm(&(&y.values - &direct)) < 1e-8);
    }

    #[test]
    fn composing_orders_adds() {
        let g = gft_from_laplacian(&laplacian(&path_graph(4)).unwrap()).unwrap();
        let x = test_signal(4, 6);
        let first = jfrt_forward(&x, &g, FractionalOrderPair { alpha: 0.5, beta: 0.3 }).unwrap();
        let second =
            jfrt_forward(&first, &g, FractionalOrderPair { alpha: 0.5, beta: 0.7 }).unwrap();
        let direct = jfrt_forward(&x, &g, FractionalOrderPair { alpha: 1.0, beta: 1.0 }).unwrap();
        assert!(fro_norm(&(&second.values - &direct.values)) < 1e-7);
    }

    #[test]
    fn inverse_undoes_forward() {
        let g = gft_from_laplacian(&laplacian(&path_graph(5)).unwrap()).unwrap();
        let x = test_signal(5, 7);
        let order = FractionalOrderPair { alpha: 0.905, beta: 1.0 };
        let y = jfrt_forward(&x, &g, order).unwrap();
        let back = jfrt_inverse(&y, &g, order).unwrap();
        let rel = fro_norm(&(&back.values - &x.values)) / x.fro_norm();
        assert!(rel < 1e-8);
    }

    #[test]
    fn inverse_at_ordinary_order_matches_closed_form() {
        let g = gft_from_laplacian(&laplacian(&path_graph(3)).unwrap()).unwrap();
        let y = test_signal(3, 4);
        let order = FractionalOrderPair { alpha: 1.0, beta: 1.0 };
        let back = jfrt_inverse(&y, &g, order).unwrap();
        let f = crate::frt::dft_matrix(4);
        let direct = g.inverse.dot(&y.values).dot(&f.mapv(|z| z.conj()));
        assert!(fro_norm(&(&back.values - &direct)) < 1e-8);
    }

    #[test]
    fn separable_and_vectorized_paths_agree() {
        let g = gft_from_laplacian(&laplacian(&path_graph(3)).unwrap()).unwrap();
        let x = test_signal(3, 4);
        let order = FractionalOrderPair { alpha: 0.7, beta: 1.3 };
        let op = joint_operator(&g, 4, order).unwrap();
        let separable = op.apply(&x).unwrap();
        let dense = op.materialize().unwrap();

        // Column-major vectorization.
        let mut vec_x = Array2::zeros((12, 1));
        for n in 0..4 {
            for m in 0..3 {
                vec_x[[n * 3 + m, 0]] = x.values[[m, n]];
            }
        }
        let vec_y = dense.dot(&vec_x);
        for n in 0..4 {
            for m in 0..3 {
                let diff = (vec_y[[n * 3 + m, 0]] - separable.values[[m, n]]).norm();
                assert!(diff < 1e-10, "entry {m},{n}");
            }
        }
    }

    #[test]
    fn joint_operator_is_unitary_for_unitary_gft() {
        let g = gft_from_laplacian(&laplacian(&path_graph(3)).unwrap()).unwrap();
        let op = joint_operator(&g, 4, FractionalOrderPair { alpha: 0.25, beta: 0.9 }).unwrap();
        let dense = op.materialize().unwrap();
        let gram = dense.dot(&conj_transpose(&dense));
        assert!(fro_norm(&(&gram - &identity(12))) < 1e-8);
    }

    #[test]
    fn materialization_respects_cap() {
        let g = gft_from_laplacian(&laplacian(&path_graph(3)).unwrap()).unwrap();
        let op = joint_operator(&g, 4, FractionalOrderPair { alpha: 1.0, beta: 1.0 }).unwrap();
        assert!(matches!(
            op.materialize_capped(11),
            Err(Error::SizeOverflow { .. })
        ));
    }

    #[test]
    fn joint_laplacian_order_zero_doubles_identity() {
        let l = laplacian(&path_graph(2)).unwrap();
        let jl = joint_fractional_laplacian(&l, 3, FractionalOrderPair { alpha: 0.0, beta: 0.0 })
            .unwrap();
        let dense = jl.materialize().unwrap();
        let twice = identity(6).mapv(|z| z * Complex64::new(2.0, 0.0));
        assert!(fro_norm(&(&dense - &twice)) < 1e-9);
    }

    #[test]
    fn joint_laplacian_spectrum_is_pairwise_sums() {
        let l = laplacian(&path_graph(2)).unwrap();
        let jl = joint_fractional_laplacian(&l, 3, FractionalOrderPair { alpha: 1.0, beta: 1.0 })
            .unwrap();
        let dense = jl.materialize().unwrap();
        let eig = crate::linalg::hermitian_eig(&dense).unwrap();
        // Graph eigenvalues {0, 2}, triangle-ring eigenvalues {0, 3, 3}.
        let mut expect = vec![0.0, 2.0, 3.0, 3.0, 5.0, 5.0];
        expect.sort_by(f64::total_cmp);
        for (got, want) in eig.values.iter().zip(expect.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-8);
        }
        // The separable grid carries the same multiset.
        let mut grid: Vec<f64> = jl.joint_spectrum().iter().copied().collect();
        grid.sort_by(f64::total_cmp);
        for (got, want) in grid.iter().zip(expect.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-8);
        }
    }

    #[test]
    fn variation_of_zero_and_constants() {
        let l = laplacian(&path_graph(3)).unwrap();
        let jl = joint_fractional_laplacian(&l, 4, FractionalOrderPair { alpha: 1.0, beta: 1.0 })
            .unwrap();
        let zero = JointSignal::new(Array2::zeros((3, 4)));
        assert_abs_diff_eq!(joint_fractional_variation(&zero, &jl).unwrap(), 0.0);
        let ones = JointSignal::new(Array2::from_elem((3, 4), Complex64::new(1.0, 0.0)));
        let v = joint_fractional_variation(&ones, &jl).unwrap();
        assert!(v.abs() < 1e-9, "constant signal variation {v}");
    }

    #[test]
    fn variation_matches_dense_quadratic_form() {
        let l = laplacian(&path_graph(3)).unwrap();
        let jl = joint_fractional_laplacian(&l, 4, FractionalOrderPair { alpha: 0.5, beta: 1.3 })
            .unwrap();
        let x = test_signal(3, 4);
        let separable = joint_fractional_variation(&x, &jl).unwrap();

        let dense = jl.materialize().unwrap();
        let mut vec_x = Array2::zeros((12, 1));
        for n in 0..4 {
            for m in 0..3 {
                vec_x[[n * 3 + m, 0]] = x.values[[m, n]];
            }
        }
        let form = conj_transpose(&vec_x).dot(&dense).dot(&vec_x)[[0, 0]];
        assert!((separable - form.re).abs() < 1e-9);
        assert!(separable >= -1e-8 * x.fro_norm().powi(2));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = gft_from_laplacian(&laplacian(&path_graph(3)).unwrap()).unwrap();
        let x = test_signal(4, 4);
        assert!(matches!(
            jfrt_forward(&x, &g, FractionalOrderPair { alpha: 0.0, beta: 0.0 }),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ring_time_factor_matches_ring_graph_laplacian() {
        let l = laplacian(&ring_graph(5).unwrap()).unwrap();
        let jl = joint_fractional_laplacian(&l, 5, FractionalOrderPair { alpha: 1.0, beta: 1.0 })
            .unwrap();
        assert!(fro_norm(&(&jl.time_part.matrix - &l.matrix)) < 1e-9);
    }
}
