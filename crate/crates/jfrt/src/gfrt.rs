//! Graph Fourier transforms and their fractional powers, plus fractional
//! graph and time Laplacians.
//!
//! A `GftOperator` carries the forward/inverse transform pair and an
//! eigendecomposition of the forward matrix itself, so fractional powers
//! `F_G^beta` come from one fixed basis and are exactly index-additive.
//!
//! Branch conventions matter here. `F_G = U^H` and powers of `U` (for the
//! fractional Laplacian) use the `[-pi, pi)` branch of `linalg`; powers of
//! `F_G` use the conjugate branch `(-pi, pi]`. The two choices are conjugate
//! duals, which keeps `(U^b)^H` equal to `F_G^b` even when eigenvalues land
//! exactly on the branch cut at -1.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Inverse, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frt::{dfrt_basis, dfrt_matrix, dft_matrix};
use crate::graph::{laplacian, ring_graph, Graph, Laplacian};
use crate::linalg::{
    conj_transpose, fro_norm, hermitian_eig, normal_eig, psd_fractional_power,
    unitary_fractional_power, ComplexMatrix,
};

const CONDITION_CAP: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GftFlavor {
    Laplacian,
    Adjacency,
}

/// Eigendecomposition of the forward transform, kept for fractionalization:
/// `F_G^b = vectors diag(exp(b log_values)) inverse`.
#[derive(Debug, Clone)]
pub(crate) struct FractionalBasis {
    vectors: ComplexMatrix,
    inverse: ComplexMatrix,
    log_values: Vec<Complex64>,
}

impl FractionalBasis {
    fn from_normal(forward: &ComplexMatrix) -> Result<FractionalBasis> {
        let (vectors, values) = normal_eig(forward)?;
        let log_values = values.iter().map(|lam| lam.ln()).collect();
        let inverse = conj_transpose(&vectors);
        Ok(FractionalBasis {
            vectors,
            inverse,
            log_values,
        })
    }

    fn from_general(forward: &ComplexMatrix) -> Result<FractionalBasis> {
        let (values, vectors) = forward
            .eig()
            .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
        let cond = condition_number(&vectors)?;
        if cond > CONDITION_CAP {
            return Err(Error::Defective {
                cond,
                cap: CONDITION_CAP,
            });
        }
        let inverse = vectors
            .inv()
            .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
        let log_values = values.iter().map(|lam| lam.ln()).collect();
        Ok(FractionalBasis {
            vectors,
            inverse,
            log_values,
        })
    }

    pub(crate) fn power(&self, beta: f64) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (mut col, &log) in scaled.columns_mut().into_iter().zip(&self.log_values) {
            let w = (log * beta).exp();
            col.mapv_inplace(|z| z * w);
        }
        scaled.dot(&self.inverse)
    }
}

fn condition_number(m: &ComplexMatrix) -> Result<f64> {
    let (_, s, _) = m
        .svd(false, false)
        .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
    let smax = s.iter().fold(0.0f64, |a, &b| a.max(b));
    let smin = s.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if smin <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(smax / smin)
}

/// A graph Fourier transform: forward/inverse pair plus the spectral data
/// needed to take fractional powers.
#[derive(Debug, Clone)]
pub struct GftOperator {
    pub forward: ComplexMatrix,
    pub inverse: ComplexMatrix,
    pub flavor: GftFlavor,
    /// Laplacian eigenvalues ascending, aligned with the rows of `forward`;
    /// present only for the Laplacian flavor.
    pub source_spectrum: Option<Array1<f64>>,
    pub(crate) frac: FractionalBasis,
}

impl GftOperator {
    pub fn n_vertices(&self) -> usize {
        self.forward.nrows()
    }
}

/// GFT in the Laplacian eigenbasis: `forward = U^H`, unitary.
pub fn gft_from_laplacian(l: &Laplacian) -> Result<GftOperator> {
    let forward = conj_transpose(&l.basis.vectors);
    let inverse = l.basis.vectors.clone();
    let frac = FractionalBasis::from_normal(&forward)?;
    Ok(GftOperator {
        forward,
        inverse,
        flavor: GftFlavor::Laplacian,
        source_spectrum: Some(l.basis.values.clone()),
        frac,
    })
}

/// GFT from the adjacency eigendecomposition: `forward = V^{-1}`. Hermitian
/// adjacencies take the unitary path; anything else must be diagonalizable
/// with eigenvector condition number at most `1e8`.
pub fn gft_from_adjacency(g: &Graph) -> Result<GftOperator> {
    let a = &g.adjacency;
    let deviation = fro_norm(&(a - &conj_transpose(a)));
    if deviation <= 1e-8 * fro_norm(a).max(1.0) {
        let basis = hermitian_eig(a)?;
        let forward = conj_transpose(&basis.vectors);
        let inverse = basis.vectors.clone();
        let frac = FractionalBasis::from_normal(&forward)?;
        return Ok(GftOperator {
            forward,
            inverse,
            flavor: GftFlavor::Adjacency,
            source_spectrum: None,
            frac,
        });
    }

    let (values, mut vectors) = a
        .eig()
        .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
    let cond = condition_number(&vectors)?;
    if cond > CONDITION_CAP {
        return Err(Error::Defective {
            cond,
            cap: CONDITION_CAP,
        });
    }
    // Deterministic eigenvector matrix: order pairs by eigenvalue, fix phase.
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .re
            .total_cmp(&values[j].re)
            .then(values[i].im.total_cmp(&values[j].im))
    });
    let mut sorted = Array2::zeros(vectors.dim());
    for (dst, &src) in order.iter().enumerate() {
        sorted.column_mut(dst).assign(&vectors.column(src));
    }
    vectors = sorted;
    crate::linalg::sign_normalize_columns(&mut vectors);

    let forward = vectors
        .inv()
        .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
    let frac = FractionalBasis::from_general(&forward)?;
    Ok(GftOperator {
        forward,
        inverse: vectors,
        flavor: GftFlavor::Adjacency,
        source_spectrum: None,
        frac,
    })
}

/// GFT for a circulant adjacency with the Hermite-Gaussian eigenbasis, so
/// that fractional powers reproduce the fractional DFT exactly.
pub fn circulant_gft(n: usize) -> Result<GftOperator> {
    let basis = dfrt_basis(n)?;
    let forward = dft_matrix(n);
    let inverse = conj_transpose(&forward);
    let log_values = basis
        .index_map
        .iter()
        .map(|&k| Complex64::new(0.0, -std::f64::consts::PI * k as f64 / 2.0))
        .collect();
    let frac = FractionalBasis {
        vectors: basis.hermite_vectors.clone(),
        inverse: basis.hermite_vectors.t().to_owned(),
        log_values,
    };
    Ok(GftOperator {
        forward,
        inverse,
        flavor: GftFlavor::Adjacency,
        source_spectrum: None,
        frac,
    })
}

/// Order-`beta` fractional power of the graph Fourier transform.
pub fn gfrt_matrix(op: &GftOperator, beta: f64) -> ComplexMatrix {
    op.frac.power(beta)
}

/// Fractional Laplacian `U^p diag(lambda^p) (U^p)^H` with its spectral data.
#[derive(Debug, Clone)]
pub struct FractionalLaplacian {
    pub order: f64,
    pub matrix: ComplexMatrix,
    /// Powered eigenvalues, aligned with the row indexing of the matching
    /// fractional transform (ascending for graphs, DFT-bin order for time).
    pub spectrum: Array1<f64>,
    pub vectors_power: ComplexMatrix,
}

/// `(L_G)_order` from a graph Laplacian.
pub fn fractional_laplacian(l: &Laplacian, order: f64) -> Result<FractionalLaplacian> {
    if order < 0.0 {
        return Err(Error::NegativeOrder { order });
    }
    let spectrum = psd_fractional_power(&l.basis.values, order)?;
    let vectors_power = unitary_fractional_power(&l.basis.vectors, order)?;
    let mut scaled = vectors_power.clone();
    for (mut col, &w) in scaled.columns_mut().into_iter().zip(spectrum.iter()) {
        col.mapv_inplace(|z| z * w);
    }
    let matrix = scaled.dot(&conj_transpose(&vectors_power));
    Ok(FractionalLaplacian {
        order,
        matrix,
        spectrum,
        vectors_power,
    })
}

/// `(L_T)_order`: the fractional Laplacian of the time ring, built in the
/// Hermite-Gaussian basis so that it shares eigenvectors with the fractional
/// DFT. Spectrum entries follow DFT bin order `w_n = 2 - 2 cos(2 pi n / T)`,
/// matching the rows of `F^order`.
pub fn fractional_time_laplacian(t: usize, order: f64) -> Result<FractionalLaplacian> {
    if t < 3 {
        return Err(Error::TooSmall { min: 3, got: t });
    }
    if order < 0.0 {
        return Err(Error::NegativeOrder { order });
    }
    let omega = Array1::from_shape_fn(t, |n| {
        2.0 - 2.0 * (2.0 * std::f64::consts::PI * n as f64 / t as f64).cos()
    });
    let spectrum = psd_fractional_power(&omega, order)?;
    let f_alpha = dfrt_matrix(t, order)?;
    let vectors_power = conj_transpose(&f_alpha);
    let mut scaled = vectors_power.clone();
    for (mut col, &w) in scaled.columns_mut().into_iter().zip(spectrum.iter()) {
        col.mapv_inplace(|z| z * w);
    }
    let matrix = scaled.dot(&f_alpha);
    Ok(FractionalLaplacian {
        order,
        matrix,
        spectrum,
        vectors_power,
    })
}

/// Convenience: the ring Laplacian behind `fractional_time_laplacian`.
pub fn time_ring_laplacian(t: usize) -> Result<Laplacian> {
    laplacian(&ring_graph(t)?)
}
