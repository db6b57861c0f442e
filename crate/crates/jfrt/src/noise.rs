//! Seeded Gaussian and sparse noise models for experiments.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::joint::JointSignal;

fn noise_sigma(x: &JointSignal, snr_db: f64) -> Result<f64> {
    let energy = x.fro_norm().powi(2);
    if energy == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let nt = (x.n_vertices() * x.n_time()) as f64;
    Ok((energy / (nt * 10f64.powf(snr_db / 10.0))).sqrt())
}

/// Draws the full noise matrix in row-major order. Real inputs get real
/// noise; complex inputs get circularly symmetric noise with the same
/// per-entry variance.
fn noise_matrix(x: &JointSignal, sigma: f64, rng: &mut ChaCha8Rng) -> Array2<Complex64> {
    let shape = (x.n_vertices(), x.n_time());
    if x.is_real() {
        Array2::from_shape_fn(shape, |_| {
            let g: f64 = StandardNormal.sample(rng);
            Complex64::new(sigma * g, 0.0)
        })
    } else {
        let s = sigma / 2f64.sqrt();
        Array2::from_shape_fn(shape, |_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(s * re, s * im)
        })
    }
}

/// Adds i.i.d. Gaussian noise with variance `||X||_F^2 / (NT 10^{snr/10})`
/// per entry. An infinite `snr_db` returns the input unchanged.
pub fn add_gaussian_noise(x: &JointSignal, snr_db: f64, seed: u64) -> Result<JointSignal> {
    if snr_db == f64::INFINITY {
        return Ok(x.clone());
    }
    let sigma = noise_sigma(x, snr_db)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = noise_matrix(x, sigma, &mut rng);
    Ok(JointSignal::new(&x.values + &noise))
}

/// Adds the same Gaussian noise to a Bernoulli(`density`) subset of entries.
/// The full noise matrix is drawn before the mask, so `density = 1`
/// reproduces `add_gaussian_noise` exactly and unmasked entries stay
/// bit-identical to the input.
pub fn add_sparse_noise(
    x: &JointSignal,
    density: f64,
    snr_db: f64,
    seed: u64,
) -> Result<JointSignal> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::BadDensity { density });
    }
    if snr_db == f64::INFINITY {
        return Ok(x.clone());
    }
    let sigma = noise_sigma(x, snr_db)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = noise_matrix(x, sigma, &mut rng);
    let mut values = x.values.clone();
    for (v, n) in values.iter_mut().zip(noise.iter()) {
        let u: f64 = rng.random();
        if u < density {
            *v += n;
        }
    }
    Ok(JointSignal::new(values))
}
