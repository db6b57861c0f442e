//! Tikhonov denoising in the joint fractional domain.
//!
//! Minimizing `||y - x||^2 + x^H (tau_t (L_T)_a (+) tau_g (L_G)_b) x` has the
//! closed-form solution of a multiplicative filter in the joint fractional
//! basis: `h_{m,n} = 1 / (1 + tau_g lambda_m^b + tau_t omega_n^a)`. Because
//! the transforms and the fractional Laplacians share eigenbases (the
//! Hermite-Gaussian construction on the time side, conjugate-dual branch
//! choices on the graph side), filtering in the transform domain equals the
//! dense regularized solve.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::gfrt::{GftFlavor, GftOperator};
use crate::graph::Laplacian;
use crate::joint::{
    jfrt_forward, jfrt_inverse, weighted_joint_fractional_laplacian, FractionalOrderPair,
    JointFractionalLaplacian, JointSignal,
};
use crate::linalg::psd_fractional_power;

/// Nonnegative Tikhonov weights for the graph and time regularizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizationParams {
    pub tau_g: f64,
    pub tau_t: f64,
}

impl RegularizationParams {
    pub fn new(tau_g: f64, tau_t: f64) -> Result<RegularizationParams> {
        if !(tau_g.is_finite() && tau_t.is_finite() && tau_g >= 0.0 && tau_t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "regularization weights must be finite and nonnegative, got ({tau_g}, {tau_t})"
            )));
        }
        Ok(RegularizationParams { tau_g, tau_t })
    }
}

/// Multiplicative joint-domain filter with coefficients in `(0, 1]`.
#[derive(Debug, Clone)]
pub struct JointFilter {
    pub order: FractionalOrderPair,
    pub params: RegularizationParams,
    pub coefficients: Array2<f64>,
}

fn filter_grid(
    graph_spectrum: &Array1<f64>,
    time_spectrum: &Array1<f64>,
    params: RegularizationParams,
) -> Array2<f64> {
    Array2::from_shape_fn((graph_spectrum.len(), time_spectrum.len()), |(m, n)| {
        1.0 / (1.0 + params.tau_g * graph_spectrum[m] + params.tau_t * time_spectrum[n])
    })
}

/// Filter coefficients from an (unweighted) joint fractional Laplacian.
pub fn build_filter(l: &JointFractionalLaplacian, params: RegularizationParams) -> JointFilter {
    JointFilter {
        order: l.order,
        params,
        coefficients: filter_grid(&l.graph_part.spectrum, &l.time_part.spectrum, params),
    }
}

/// `tau_t (L_T)_a (+) tau_g (L_G)_b`, the regularized joint fractional
/// Laplacian. At unit weights this is the plain joint fractional Laplacian;
/// at zero weights it vanishes.
pub fn regularized_joint_fractional_laplacian(
    l: &Laplacian,
    t: usize,
    order: FractionalOrderPair,
    params: RegularizationParams,
) -> Result<JointFractionalLaplacian> {
    weighted_joint_fractional_laplacian(l, t, order, params.tau_t, params.tau_g)
}

fn spectra_for(
    y: &JointSignal,
    g: &GftOperator,
    order: FractionalOrderPair,
) -> Result<(Array1<f64>, Array1<f64>)> {
    if g.flavor != GftFlavor::Laplacian {
        return Err(Error::FlavorMismatch);
    }
    let lambda = g
        .source_spectrum
        .as_ref()
        .ok_or(Error::FlavorMismatch)?;
    let t = y.n_time();
    let omega = Array1::from_shape_fn(t, |n| {
        2.0 - 2.0 * (2.0 * std::f64::consts::PI * n as f64 / t as f64).cos()
    });
    let graph_spectrum = psd_fractional_power(lambda, order.beta)?;
    let time_spectrum = psd_fractional_power(&omega, order.alpha)?;
    Ok((graph_spectrum, time_spectrum))
}

/// Closed-form Tikhonov denoiser: transform, scale each coefficient by
/// `h_{m,n}`, transform back.
pub fn denoise_spectral(
    y: &JointSignal,
    g: &GftOperator,
    order: FractionalOrderPair,
    params: RegularizationParams,
) -> Result<JointSignal> {
    let (graph_spectrum, time_spectrum) = spectra_for(y, g, order)?;
    let h = filter_grid(&graph_spectrum, &time_spectrum, params);
    let mut transformed = jfrt_forward(y, g, order)?;
    for ((m, n), v) in transformed.values.indexed_iter_mut() {
        *v *= h[[m, n]];
    }
    jfrt_inverse(&transformed, g, order)
}

/// `||y - x||_F^2 + vec(x)^H L vec(x)`.
pub fn tikhonov_objective(
    x: &JointSignal,
    y: &JointSignal,
    l: &JointFractionalLaplacian,
) -> Result<f64> {
    if x.n_vertices() != y.n_vertices() || x.n_time() != y.n_time() {
        return Err(Error::DimensionMismatch {
            context: "Tikhonov objective",
            expected: (y.n_vertices(), y.n_time()),
            got: (x.n_vertices(), x.n_time()),
        });
    }
    let residual: f64 = y
        .values
        .iter()
        .zip(x.values.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok(residual + crate::joint::joint_fractional_variation(x, l)?)
}

/// One grid point of a denoising sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    pub beta: f64,
    pub tau_g: f64,
    pub tau_t: f64,
    pub mse_percent: f64,
}

/// All sweep rows in grid order (alpha outermost, tau_t innermost) plus the
/// index of the minimizer.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepPoint>,
    pub argmin: usize,
    pub grid_shape: [usize; 4],
}

impl SweepResult {
    pub fn best(&self) -> &SweepPoint {
        &self.rows[self.argmin]
    }
}

/// Percentage mean squared error against a reference signal.
pub fn mse_percent(estimate: &JointSignal, reference: &JointSignal) -> Result<f64> {
    let denom = reference.fro_norm().powi(2);
    if denom == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let num: f64 = estimate
        .values
        .iter()
        .zip(reference.values.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok(100.0 * num / denom)
}

/// Evaluates the denoiser over a full `(alpha, beta, tau_g, tau_t)` grid.
///
/// The error is accumulated in the transform domain: with a unitary joint
/// transform, `||inverse(h . Y~) - clean|| = ||h . Y~ - clean~||`, so each
/// order pair needs one transform of the noisy and clean signals rather than
/// one inverse transform per tau pair.
pub fn denoise_sweep(
    y: &JointSignal,
    clean: &JointSignal,
    g: &GftOperator,
    alpha_grid: &[f64],
    beta_grid: &[f64],
    tau_g_grid: &[f64],
    tau_t_grid: &[f64],
) -> Result<SweepResult> {
    if alpha_grid.is_empty() || beta_grid.is_empty() || tau_g_grid.is_empty() || tau_t_grid.is_empty()
    {
        return Err(Error::InvalidParameter("empty sweep grid".into()));
    }
    if y.n_vertices() != clean.n_vertices() || y.n_time() != clean.n_time() {
        return Err(Error::DimensionMismatch {
            context: "denoise sweep",
            expected: (clean.n_vertices(), clean.n_time()),
            got: (y.n_vertices(), y.n_time()),
        });
    }
    let clean_energy = clean.fro_norm().powi(2);
    if clean_energy == 0.0 {
        return Err(Error::ZeroSignal);
    }

    let mut rows = Vec::with_capacity(
        alpha_grid.len() * beta_grid.len() * tau_g_grid.len() * tau_t_grid.len(),
    );
    for &alpha in alpha_grid {
        for &beta in beta_grid {
            let order = FractionalOrderPair { alpha, beta };
            let (graph_spectrum, time_spectrum) = spectra_for(y, g, order)?;
            let y_hat = jfrt_forward(y, g, order)?;
            let clean_hat = jfrt_forward(clean, g, order)?;
            for &tau_g in tau_g_grid {
                for &tau_t in tau_t_grid {
                    let params = RegularizationParams::new(tau_g, tau_t)?;
                    let h = filter_grid(&graph_spectrum, &time_spectrum, params);
                    let err: f64 = y_hat
                        .values
                        .indexed_iter()
                        .map(|((m, n), v)| (v * h[[m, n]] - clean_hat.values[[m, n]]).norm_sqr())
                        .sum();
                    rows.push(SweepPoint {
                        alpha,
                        beta,
                        tau_g,
                        tau_t,
                        mse_percent: 100.0 * err / clean_energy,
                    });
                }
            }
        }
    }

    let argmin = rows
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.mse_percent.total_cmp(&b.mse_percent))
        .map(|(i, _)| i)
        .unwrap();
    Ok(SweepResult {
        rows,
        argmin,
        grid_shape: [
            alpha_grid.len(),
            beta_grid.len(),
            tau_g_grid.len(),
            tau_t_grid.len(),
        ],
    })
}
