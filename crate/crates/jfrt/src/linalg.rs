//! Dense complex linear algebra: Hermitian and normal eigendecompositions,
//! matrix fractional powers, Kronecker products and sums.
//!
//! Everything downstream (fractional DFT, graph transforms, joint filters)
//! reduces to eigendecompositions done here. Two conventions keep results
//! deterministic across runs and platforms:
//!
//! * eigenvalues sort ascending, ties resolved by eigenvector content;
//! * each eigenvector is scaled so its largest-modulus entry is real and
//!   positive (first index wins ties).

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = Array2<Complex64>;
pub type ComplexVector = Array1<Complex64>;

/// Largest dimension a dense derived operator (Kronecker product or sum) may
/// take before construction is refused.
pub const DENSE_CAP: usize = 4096;

/// Orthonormal eigendecomposition of a Hermitian matrix: `vectors` holds the
/// eigenvectors as columns, `values` the matching real eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    pub vectors: ComplexMatrix,
    pub values: Array1<f64>,
}

impl SpectralBasis {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Builds `V diag(f(values)) V^H`.
    pub fn synthesize<F: Fn(f64) -> Complex64>(&self, f: F) -> ComplexMatrix {
        let weights: Vec<Complex64> = self.values.iter().map(|&w| f(w)).collect();
        scaled_outer(&self.vectors, &weights)
    }
}

pub fn identity(n: usize) -> ComplexMatrix {
    Array2::eye(n).mapv(|x: f64| Complex64::new(x, 0.0))
}

pub fn conj_transpose(m: &ComplexMatrix) -> ComplexMatrix {
    m.t().mapv(|z| z.conj())
}

pub fn fro_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_square(m: &ComplexMatrix) -> Result<usize> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(rows)
}

/// `V diag(w) V^H` without forming the diagonal matrix.
fn scaled_outer(vectors: &ComplexMatrix, weights: &[Complex64]) -> ComplexMatrix {
    let mut scaled = vectors.clone();
    for (mut col, &w) in scaled.columns_mut().into_iter().zip(weights) {
        col.mapv_inplace(|z| z * w);
    }
    scaled.dot(&conj_transpose(vectors))
}

/// Rotates each column so its largest-modulus entry (first index on ties) is
/// real and positive.
pub(crate) fn sign_normalize_columns(vectors: &mut ComplexMatrix) {
    for mut col in vectors.columns_mut() {
        let mut best = 0;
        let mut best_norm = 0.0f64;
        for (i, z) in col.iter().enumerate() {
            let nz = z.norm();
            if nz > best_norm {
                best_norm = nz;
                best = i;
            }
        }
        if best_norm == 0.0 {
            continue;
        }
        let phase = col[best] / best_norm;
        let rot = phase.conj();
        col.mapv_inplace(|z| z * rot);
    }
}

/// Index of the first entry with modulus above a small floor, for tie-break
/// ordering of degenerate eigenvectors.
fn first_nonzero(col: ndarray::ArrayView1<Complex64>) -> usize {
    col.iter()
        .position(|z| z.norm() > 1e-12)
        .unwrap_or(col.len())
}

fn lex_less(a: ndarray::ArrayView1<Complex64>, b: ndarray::ArrayView1<Complex64>) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.re.total_cmp(&y.re) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
        match x.im.total_cmp(&y.im) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Reorders eigenpairs so values ascend and near-degenerate groups follow the
/// deterministic eigenvector tie-break.
fn order_eigenpairs(values: &mut Array1<f64>, vectors: &mut ComplexMatrix) {
    let n = values.len();
    let scale = values.iter().fold(1.0f64, |m, &w| m.max(w.abs()));
    let tie_tol = 1e-12 * scale;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] - values[order[end - 1]] <= tie_tol {
            end += 1;
        }
        if end - start > 1 {
            let group = &mut order[start..end];
            group.sort_by(|&i, &j| {
                let a = vectors.column(i);
                let b = vectors.column(j);
                first_nonzero(a)
                    .cmp(&first_nonzero(b))
                    .then_with(|| {
                        if lex_less(a, b) {
                            std::cmp::Ordering::Less
                        } else if lex_less(b, a) {
                            std::cmp::Ordering::Greater
                        } else {
                            std::cmp::Ordering::Equal
                        }
                    })
            });
        }
        start = end;
    }

    let new_values = Array1::from_iter(order.iter().map(|&i| values[i]));
    let mut new_vectors = Array2::zeros(vectors.dim());
    for (dst, &src) in order.iter().enumerate() {
        new_vectors.column_mut(dst).assign(&vectors.column(src));
    }
    *values = new_values;
    *vectors = new_vectors;
}

/// Eigendecomposition of a Hermitian matrix with deterministic ordering and
/// sign conventions. Rejects matrices whose Hermitian deviation exceeds
/// `1e-8` relative to the Frobenius norm.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<SpectralBasis> {
    let _n = check_square(m)?;
    let mh = conj_transpose(m);
    let deviation = fro_norm(&(m - &mh)) / fro_norm(m).max(1.0);
    if deviation > 1e-8 {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = (m + &mh).mapv(|z| z * 0.5);
    let (mut values, mut vectors) = sym
        .eigh(UPLO::Lower)
        .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
    sign_normalize_columns(&mut vectors);
    order_eigenpairs(&mut values, &mut vectors);
    Ok(SpectralBasis { vectors, values })
}

/// Unitary eigendecomposition of a normal matrix.
///
/// Implemented without a general nonsymmetric solver: eigendecompose the
/// Hermitian part, then diagonalize the skew-Hermitian part inside each
/// degenerate cluster. For a normal input both parts commute, so the refined
/// vectors diagonalize the full matrix; eigenvalues are recovered as Rayleigh
/// quotients. Near-real eigenvalues are snapped onto the real axis so branch
/// cuts land on exact values.
pub(crate) fn normal_eig(a: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<Complex64>)> {
    let n = check_square(a)?;
    let ah = conj_transpose(a);
    let herm = (a + &ah).mapv(|z| z * 0.5);
    let skew = (a - &ah).mapv(|z| z * Complex64::new(0.0, -0.5));

    let (w, mut vectors) = herm
        .eigh(UPLO::Lower)
        .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
    let scale = w.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    let cluster_tol = 1e-8 * scale;

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && w[end] - w[end - 1] <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let sub = vectors.slice(ndarray::s![.., start..end]).to_owned();
            let projected = conj_transpose(&sub).dot(&skew).dot(&sub);
            let (_, rot) = projected
                .eigh(UPLO::Lower)
                .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
            let refined = sub.dot(&rot);
            vectors
                .slice_mut(ndarray::s![.., start..end])
                .assign(&refined);
        }
        start = end;
    }
    sign_normalize_columns(&mut vectors);

    let av = a.dot(&vectors);
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let col = vectors.column(j);
        let lam: Complex64 = col.iter().zip(av.column(j).iter()).map(|(v, y)| v.conj() * y).sum();
        values.push(snap_real(lam));
    }
    Ok((vectors, values))
}

/// Zeroes a negligible imaginary part so arguments of nominally real
/// eigenvalues do not dither around the branch cut.
pub(crate) fn snap_real(z: Complex64) -> Complex64 {
    if z.im.abs() <= 1e-11 * z.norm().max(1.0) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// `u^p` for unitary `u` via the principal-like branch with arguments in
/// `[-pi, pi)`: eigenvalue `-1` maps to `exp(-i pi p)`. Verifies unitarity to
/// `1e-8 * n` in Frobenius norm first.
pub fn unitary_fractional_power(u: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    let n = check_square(u)?;
    let gram = u.dot(&conj_transpose(u));
    let deviation = fro_norm(&(&gram - &identity(n)));
    if deviation > 1e-8 * n as f64 {
        return Err(Error::NotUnitary { deviation });
    }
    let (vectors, values) = normal_eig(u)?;
    let weights: Vec<Complex64> = values
        .iter()
        .map(|&lam| {
            let mut theta = lam.arg();
            if theta >= std::f64::consts::PI {
                theta = -std::f64::consts::PI;
            }
            Complex64::from_polar(1.0, p * theta)
        })
        .collect();
    Ok(scaled_outer(&vectors, &weights))
}

/// Entrywise `values^p` for the spectrum of a positive semidefinite operator.
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything lower is an
/// error. Uses the convention `0^0 = 1`.
pub fn psd_fractional_power(values: &Array1<f64>, p: f64) -> Result<Array1<f64>> {
    if p < 0.0 {
        return Err(Error::NegativeOrder { order: p });
    }
    let mut out = Array1::zeros(values.len());
    for (o, &w) in out.iter_mut().zip(values.iter()) {
        let w = if w < 0.0 {
            if w < -1e-10 {
                return Err(Error::NegativeEigenvalue { value: w });
            }
            0.0
        } else {
            w
        };
        *o = if w == 0.0 && p == 0.0 { 1.0 } else { w.powf(p) };
    }
    Ok(out)
}

fn checked_kron_dims(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<(usize, usize)> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let rows = ra.checked_mul(rb).unwrap_or(usize::MAX);
    let cols = ca.checked_mul(cb).unwrap_or(usize::MAX);
    if rows > cap || cols > cap {
        return Err(Error::SizeOverflow { rows, cols, cap });
    }
    Ok((rows, cols))
}

/// Kronecker product `a (x) b`, refused above [`DENSE_CAP`] in either result
/// dimension.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_capped(a, b, DENSE_CAP)
}

pub fn kron_capped(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let (rows, cols) = checked_kron_dims(a, b, cap)?;
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let _ = (ra, ca);
    let mut out = Array2::zeros((rows, cols));
    for (ij, &aij) in a.indexed_iter() {
        if aij == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (kl, &bkl) in b.indexed_iter() {
            out[[ij.0 * rb + kl.0, ij.1 * cb + kl.1]] = aij * bkl;
        }
    }
    Ok(out)
}

/// Kronecker sum `a (+) b = a (x) I + I (x) b` for square `a`, `b`, built
/// directly without the intermediate products.
pub fn kron_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_sum_capped(a, b, DENSE_CAP)
}

pub fn kron_sum_capped(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let n = check_square(a)?;
    let m = check_square(b)?;
    let dim = n.checked_mul(m).unwrap_or(usize::MAX);
    if dim > cap {
        return Err(Error::SizeOverflow {
            rows: dim,
            cols: dim,
            cap,
        });
    }
    let mut out = Array2::zeros((dim, dim));
    for ((i, j), &aij) in a.indexed_iter() {
        for k in 0..m {
            out[[i * m + k, j * m + k]] += aij;
        }
    }
    for ((k, l), &bkl) in b.indexed_iter() {
        for i in 0..n {
            out[[i * m + k, i * m + l]] += bkl;
        }
    }
    Ok(out)
}
